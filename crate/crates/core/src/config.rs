//! Scoring weights and the differentiate palette.

use serde::{Deserialize, Serialize};

use crate::model::Rgb;

/// Severity weight per relation kind. Conditional instances count at half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Weights {
    pub full_redundancy: f64,
    pub partial_redundancy: f64,
    pub multiples_same_grouping: f64,
    pub multiples_same_data: f64,
    pub hallucinator: f64,
    pub confuser: f64,
    /// Added on the consistency axis for same-grouping multiples whose value
    /// domains differ.
    pub domain_mismatch: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            full_redundancy: 3.0,
            partial_redundancy: 2.0,
            multiples_same_grouping: 1.0,
            multiples_same_data: 1.0,
            hallucinator: 2.0,
            confuser: 2.0,
            domain_mismatch: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteScheme {
    pub id: String,
    pub colors: Vec<Rgb>,
}

/// Ordered candidates for differentiate; the first non-colliding entry wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Palette {
    pub constants: Vec<Rgb>,
    pub schemes: Vec<PaletteScheme>,
    pub sizes: Vec<(f64, f64)>,
}

fn rgb(hex: &str) -> Rgb {
    Rgb::parse(hex).expect("built-in palette colors are valid")
}

fn scheme(id: &str, colors: &[&str]) -> PaletteScheme {
    PaletteScheme {
        id: id.to_string(),
        colors: colors.iter().map(|c| rgb(c)).collect(),
    }
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            constants: [
                "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#ff7f0e", "#1f77b4",
                "#d62728",
            ]
            .iter()
            .map(|c| rgb(c))
            .collect(),
            schemes: vec![
                scheme(
                    "greenpink",
                    &["#98df8a", "#f7b6d2", "#c5b0d5", "#c49c94", "#dbdb8d", "#9edae5"],
                ),
                scheme(
                    "tableau10",
                    &[
                        "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                        "#9c755f", "#bab0ac",
                    ],
                ),
                scheme(
                    "set2",
                    &[
                        "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3", "#a6d854", "#ffd92f", "#e5c494", "#b3b3b3",
                    ],
                ),
                scheme(
                    "dark2",
                    &[
                        "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
                    ],
                ),
                scheme(
                    "pastel1",
                    &[
                        "#fbb4ae", "#b3cde3", "#ccebc5", "#decbe4", "#fed9a6", "#ffffcc", "#e5d8bd", "#fddaec",
                    ],
                ),
                scheme(
                    "accent",
                    &[
                        "#7fc97f", "#beaed4", "#fdc086", "#ffff99", "#386cb0", "#f0027f", "#bf5b17", "#666667",
                    ],
                ),
                scheme(
                    "set1",
                    &[
                        "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
                    ],
                ),
                scheme(
                    "purples",
                    &[
                        "#efedf5", "#dadaeb", "#bcbddc", "#9e9ac8", "#807dba", "#6a51a3", "#54278f", "#3f007d",
                    ],
                ),
                scheme(
                    "oranges",
                    &[
                        "#fee6ce", "#fdd0a2", "#fdae6b", "#fd8d3c", "#f16913", "#d94801", "#a63603", "#7f2704",
                    ],
                ),
                scheme(
                    "greens",
                    &[
                        "#e5f5e0", "#c7e9c0", "#a1d99b", "#74c476", "#41ab5d", "#238b45", "#006d2c", "#00441b",
                    ],
                ),
            ],
            sizes: vec![
                (1.0, 4.0),
                (2.0, 8.0),
                (3.0, 12.0),
                (4.0, 16.0),
                (6.0, 24.0),
                (8.0, 32.0),
                (10.0, 40.0),
                (12.0, 48.0),
                (14.0, 56.0),
                (16.0, 64.0),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub weights: Weights,
    pub palette: Palette,
}
