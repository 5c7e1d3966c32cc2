//! Figure presets: named sweep specifications that regenerate the reference
//! datasets, one spec per curve/panel variant.
//!
//! Base parameter sets are transcribed field-for-field from the reference
//! parameter tables; axis ranges that the tables leave implicit (plot-extent
//! readings) are documented next to each preset.

use crate::darkmode::Coupling;
use crate::error::{Error, Result};
use crate::model::NetworkParams;
use crate::sweep::{GridSpec, OutputKind, SweepAxis, SweepSpec};

/// One curve/panel variant of a figure dataset.
#[derive(Debug, Clone)]
pub struct PresetVariant {
    /// File-name-safe variant label (`<preset>__<label>.csv`).
    pub label: String,
    pub spec: SweepSpec,
}

/// A named figure dataset: one or more sweep variants.
#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub name: &'static str,
    pub variants: Vec<PresetVariant>,
}

/// Every known preset name.
pub const PRESET_NAMES: [&str; 21] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b",
    "fig6a", "fig6b", "fig6c", "fig6d", "fig6e", "fig6f", "fig7a", "fig7b", "fig7c", "fig11a",
    "fig11b",
];

/// Standard 1-D and 2-D grid densities.
const GRID_1D: usize = 201;
const GRID_2D: usize = 101;

fn lin(start: f64, stop: f64, count: usize) -> GridSpec {
    GridSpec::Linear { start, stop, count }
}

fn log10(start: f64, stop: f64, count: usize) -> GridSpec {
    GridSpec::Log10 { start, stop, count }
}

/// Chain system (auxiliary cavity coupled to b1 only): the standard
/// entanglement-generation parameter set.
fn chain_base() -> NetworkParams {
    NetworkParams {
        omega1: 1.0,
        omega2: 1.0,
        gamma1: 1e-5,
        gamma2: 1e-5,
        kappa: 0.1,
        kappa_s: 0.1,
        delta_c: 1.0,
        delta_s: 1.0,
        g1: 0.15,
        g2: 0.15,
        gs1: 0.1,
        gs2: 0.0,
        j_hop: 0.0,
        eta_hop: 0.0,
        nbar1: 100.0,
        nbar2: 100.0,
        aux_present: true,
    }
}

/// Fully connected network: all four switchable channels on.
fn network_base() -> NetworkParams {
    NetworkParams {
        gs2: 0.1,
        j_hop: 0.05,
        eta_hop: 0.05,
        ..chain_base()
    }
}

/// Mechanical-entanglement parameter set (heavier mechanical damping,
/// far-detuned auxiliary drive).
fn mech_base() -> NetworkParams {
    NetworkParams {
        gamma1: 0.1,
        gamma2: 0.1,
        delta_s: 5.0,
        gs1: 0.05,
        nbar1: 0.0,
        nbar2: 0.0,
        ..chain_base()
    }
}

fn gs1_variant(base: NetworkParams, gs1: f64) -> NetworkParams {
    NetworkParams { gs1, ..base }
}

fn fmt_value(v: f64) -> String {
    // compact literal form for labels: 0.05 -> "0.05"
    let s = format!("{v}");
    s.replace('-', "m")
}

fn detuning_axis() -> SweepAxis {
    SweepAxis::new("delta_s", lin(0.5, 1.5, GRID_1D))
}

fn nbar_axis(grid: GridSpec) -> SweepAxis {
    SweepAxis::joint("nbar", &["nbar1", "nbar2"], grid)
}

fn variants_over_gs1(
    base: NetworkParams,
    gs1_values: &[f64],
    axis: SweepAxis,
    outputs: Vec<OutputKind>,
) -> Vec<PresetVariant> {
    gs1_values
        .iter()
        .map(|&gs1| PresetVariant {
            label: format!("gs1_{}", fmt_value(gs1)),
            spec: SweepSpec::new(gs1_variant(base, gs1), vec![axis.clone()], outputs.clone()),
        })
        .collect()
}

fn switch_off(base: NetworkParams, off: &[Coupling]) -> NetworkParams {
    let mut p = base;
    for c in off {
        match c {
            Coupling::J => p.j_hop = 0.0,
            Coupling::Eta => p.eta_hop = 0.0,
            Coupling::Gs1 => p.gs1 = 0.0,
            Coupling::Gs2 => p.gs2 = 0.0,
        }
    }
    p
}

fn off_label(off: &[Coupling]) -> String {
    let names: Vec<&str> = off.iter().map(|c| c.label()).collect();
    format!("off_{}", names.join("_"))
}

fn network_variants(cases: &[&[Coupling]], output: OutputKind) -> Vec<PresetVariant> {
    cases
        .iter()
        .map(|&off| PresetVariant {
            label: off_label(off),
            spec: SweepSpec::new(
                switch_off(network_base(), off),
                vec![detuning_axis()],
                vec![output, OutputKind::M1, OutputKind::M2],
            ),
        })
        .collect()
}

const ONE_OFF: [&[Coupling]; 4] = [
    &[Coupling::J],
    &[Coupling::Eta],
    &[Coupling::Gs1],
    &[Coupling::Gs2],
];
const TWO_OFF: [&[Coupling]; 6] = [
    &[Coupling::J, Coupling::Eta],
    &[Coupling::Gs1, Coupling::Gs2],
    &[Coupling::J, Coupling::Gs1],
    &[Coupling::J, Coupling::Gs2],
    &[Coupling::Eta, Coupling::Gs1],
    &[Coupling::Eta, Coupling::Gs2],
];
const THREE_OFF: [&[Coupling]; 4] = [
    &[Coupling::J, Coupling::Gs1, Coupling::Gs2],
    &[Coupling::Eta, Coupling::Gs1, Coupling::Gs2],
    &[Coupling::J, Coupling::Eta, Coupling::Gs1],
    &[Coupling::J, Coupling::Eta, Coupling::Gs2],
];

/// Build the named figure preset.
pub fn figure_preset(name: &str) -> Result<FigurePreset> {
    let preset = match name {
        // detuning x coupling maps of the aux-assisted entanglement;
        // gs1 extent [0, 0.1] is a plot reading
        "fig2a" | "fig2b" => {
            let output = if name == "fig2a" {
                OutputKind::EnAB1
            } else {
                OutputKind::EnAB2
            };
            FigurePreset {
                name: if name == "fig2a" { "fig2a" } else { "fig2b" },
                variants: vec![PresetVariant {
                    label: "grid".into(),
                    spec: SweepSpec::new(
                        chain_base(),
                        vec![
                            SweepAxis::new("delta_s", lin(0.5, 1.5, GRID_2D)),
                            SweepAxis::new("gs1", lin(0.0, 0.1, GRID_2D)),
                        ],
                        vec![output],
                    ),
                }],
            }
        }
        // detuning cuts at gs1 in {0, 0.05, 0.1}
        "fig2c" | "fig2d" => {
            let output = if name == "fig2c" {
                OutputKind::EnAB1
            } else {
                OutputKind::EnAB2
            };
            FigurePreset {
                name: if name == "fig2c" { "fig2c" } else { "fig2d" },
                variants: variants_over_gs1(
                    chain_base(),
                    &[0.0, 0.05, 0.1],
                    detuning_axis(),
                    vec![output],
                ),
            }
        }
        // mechanical frequency mismatch; omega2 range [0.8, 1.2] around the
        // degeneracy valley
        "fig3a" | "fig3b" => {
            let output = if name == "fig3a" {
                OutputKind::EnAB1
            } else {
                OutputKind::EnAB2
            };
            FigurePreset {
                name: if name == "fig3a" { "fig3a" } else { "fig3b" },
                variants: variants_over_gs1(
                    chain_base(),
                    &[0.0, 0.02, 0.04, 0.06, 0.08, 0.1],
                    SweepAxis::new("omega2", lin(0.8, 1.2, GRID_1D)),
                    vec![output],
                ),
            }
        }
        // thermal robustness: nbar from 1e-3 to 1e3 in both variants
        "fig4a" => FigurePreset {
            name: "fig4a",
            variants: variants_over_gs1(
                chain_base(),
                &[0.0, 0.1],
                nbar_axis(log10(1e-3, 1e3, GRID_1D)),
                vec![OutputKind::EnAB1, OutputKind::EnAB2],
            ),
        },
        // sideband resolution: kappa extent [0.05, 1] is a plot reading
        "fig4b" => FigurePreset {
            name: "fig4b",
            variants: variants_over_gs1(
                chain_base(),
                &[0.0, 0.1],
                SweepAxis::new("kappa", lin(0.05, 1.0, GRID_1D)),
                vec![OutputKind::EnAB1, OutputKind::EnAB2],
            ),
        },
        // mechanical entanglement vs thermal occupation at delta_c = 3;
        // nbar extent [1e-4, 1] is a plot reading
        "fig5a" => FigurePreset {
            name: "fig5a",
            variants: variants_over_gs1(
                NetworkParams {
                    delta_c: 3.0,
                    ..mech_base()
                },
                &[0.0, 0.05],
                nbar_axis(log10(1e-4, 1.0, GRID_1D)),
                vec![OutputKind::EnB1B2],
            ),
        },
        // mechanical entanglement vs drive detuning at nbar = 0;
        // delta_c extent [0.5, 5] is a plot reading
        "fig5b" => FigurePreset {
            name: "fig5b",
            variants: variants_over_gs1(
                mech_base(),
                &[0.0, 0.05],
                SweepAxis::new("delta_c", lin(0.5, 5.0, GRID_1D)),
                vec![OutputKind::EnB1B2],
            ),
        },
        // network coupling-configuration taxonomy
        "fig6a" => FigurePreset {
            name: "fig6a",
            variants: network_variants(&ONE_OFF, OutputKind::EnAB1),
        },
        "fig6b" => FigurePreset {
            name: "fig6b",
            variants: network_variants(&ONE_OFF, OutputKind::EnAB2),
        },
        "fig6c" => FigurePreset {
            name: "fig6c",
            variants: network_variants(&TWO_OFF, OutputKind::EnAB1),
        },
        "fig6d" => FigurePreset {
            name: "fig6d",
            variants: network_variants(&TWO_OFF, OutputKind::EnAB2),
        },
        "fig6e" => FigurePreset {
            name: "fig6e",
            variants: network_variants(&THREE_OFF, OutputKind::EnAB1),
        },
        "fig6f" => FigurePreset {
            name: "fig6f",
            variants: network_variants(&THREE_OFF, OutputKind::EnAB2),
        },
        // aux-coupling asymmetry maps; both couplings span [0, 0.15]
        "fig7a" | "fig7b" => {
            let output = if name == "fig7a" {
                OutputKind::EnAB1
            } else {
                OutputKind::EnAB2
            };
            FigurePreset {
                name: if name == "fig7a" { "fig7a" } else { "fig7b" },
                variants: vec![PresetVariant {
                    label: "grid".into(),
                    spec: SweepSpec::new(
                        network_base(),
                        vec![
                            SweepAxis::new("gs1", lin(0.0, 0.15, GRID_2D)),
                            SweepAxis::new("gs2", lin(0.0, 0.15, GRID_2D)),
                        ],
                        vec![output],
                    ),
                }],
            }
        }
        // coupling-ratio cut: gs2/gs1 in [0, 2] with gs1 fixed at 0.1, so the
        // gs2 axis is the explicit list ratio * 0.1
        "fig7c" => {
            let gs1 = 0.1;
            let ratios = lin(0.0, 2.0, GRID_1D).values()?;
            let gs2_values: Vec<f64> = ratios.iter().map(|r| r * gs1).collect();
            FigurePreset {
                name: "fig7c",
                variants: vec![PresetVariant {
                    label: "ratio".into(),
                    spec: SweepSpec::new(
                        NetworkParams {
                            gs1,
                            ..network_base()
                        },
                        vec![SweepAxis::new(
                            "gs2",
                            GridSpec::Explicit { values: gs2_values },
                        )],
                        vec![OutputKind::EnAB1, OutputKind::EnAB2, OutputKind::M2],
                    ),
                }],
            }
        }
        // three- vs four-mode comparison over the cavity decay rate
        "fig11a" | "fig11b" => {
            let nbar = if name == "fig11a" { 0.0 } else { 100.0 };
            let four = NetworkParams {
                nbar1: nbar,
                nbar2: nbar,
                ..chain_base()
            };
            let three = NetworkParams {
                gs1: 0.0,
                aux_present: false,
                ..four
            };
            let axis = SweepAxis::new("kappa", lin(0.05, 1.0, GRID_1D));
            let outputs = vec![OutputKind::EnAB1, OutputKind::EnAB2];
            FigurePreset {
                name: if name == "fig11a" { "fig11a" } else { "fig11b" },
                variants: vec![
                    PresetVariant {
                        label: "four_mode".into(),
                        spec: SweepSpec::new(four, vec![axis.clone()], outputs.clone()),
                    },
                    PresetVariant {
                        label: "three_mode".into(),
                        spec: SweepSpec::new(three, vec![axis], outputs),
                    },
                ],
            }
        }
        other => {
            return Err(Error::UnknownPreset {
                name: other.to_string(),
                available: PRESET_NAMES.join(", "),
            })
        }
    };
    Ok(preset)
}
