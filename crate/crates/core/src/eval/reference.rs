//! Published ten-term parameter sets, transcribed digit for digit.

use std::fmt;
use std::str::FromStr;

use crate::dictionary::{AtomKind, BasisFamily, Term};
use crate::error::{Error, Result};
use crate::presets::PresetName;
use crate::scalar::Scalar;
use crate::selector::SparseApproximant;

/// Identifier of a published parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceTable {
    Table1Alpha25,
    Table1Alpha50,
    Table1Alpha75,
    Table2Alpha25,
    Table2Alpha50,
    Table2Alpha75,
}

impl ReferenceTable {
    pub const ALL: [ReferenceTable; 6] = [
        ReferenceTable::Table1Alpha25,
        ReferenceTable::Table1Alpha50,
        ReferenceTable::Table1Alpha75,
        ReferenceTable::Table2Alpha25,
        ReferenceTable::Table2Alpha50,
        ReferenceTable::Table2Alpha75,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ReferenceTable::Table1Alpha25 => "table1_a25",
            ReferenceTable::Table1Alpha50 => "table1_a50",
            ReferenceTable::Table1Alpha75 => "table1_a75",
            ReferenceTable::Table2Alpha25 => "table2_a25",
            ReferenceTable::Table2Alpha50 => "table2_a50",
            ReferenceTable::Table2Alpha75 => "table2_a75",
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            ReferenceTable::Table1Alpha25 | ReferenceTable::Table2Alpha25 => 0.25,
            ReferenceTable::Table1Alpha50 | ReferenceTable::Table2Alpha50 => 0.5,
            ReferenceTable::Table1Alpha75 | ReferenceTable::Table2Alpha75 => 0.75,
        }
    }

    /// Experiment whose grid the parameters were fitted on.
    pub fn preset(self) -> PresetName {
        match self {
            ReferenceTable::Table1Alpha25
            | ReferenceTable::Table1Alpha50
            | ReferenceTable::Table1Alpha75 => PresetName::RationalPower,
            _ => PresetName::ExpsumStretched,
        }
    }

    pub fn kind(self) -> AtomKind {
        match self.preset() {
            PresetName::RationalPower => AtomKind::RationalPinned,
            PresetName::ExpsumStretched => AtomKind::ExpPinned,
        }
    }

    /// `(u_i, v_i)` rows in published order.
    pub fn rows(self) -> &'static [(f64, f64); 10] {
        match self {
            ReferenceTable::Table1Alpha25 => &TABLE1_A25,
            ReferenceTable::Table1Alpha50 => &TABLE1_A50,
            ReferenceTable::Table1Alpha75 => &TABLE1_A75,
            ReferenceTable::Table2Alpha25 => &TABLE2_A25,
            ReferenceTable::Table2Alpha50 => &TABLE2_A50,
            ReferenceTable::Table2Alpha75 => &TABLE2_A75,
        }
    }
}

impl fmt::Display for ReferenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ReferenceTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceTable::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::UnknownTable(s.to_owned()))
    }
}

/// The published terms as an approximant with offset `f(a) = 1`.
pub fn load_reference_params<T: Scalar>(table: ReferenceTable) -> SparseApproximant<T> {
    let family = BasisFamily::new(table.kind(), T::one()).expect("pinned family");
    let terms = table.rows().iter().map(|&(u, v)| Term { u: T::lit(u), v: T::lit(v) }).collect();
    SparseApproximant::new(family, terms).expect("published terms are positive and distinct")
}

/// Parses an identifier and loads it.
pub fn load_reference_by_id<T: Scalar>(id: &str) -> Result<SparseApproximant<T>> {
    Ok(load_reference_params(id.parse()?))
}

// x^{-α}, α = 0.25, pinned rational atoms (first table, left column pair).
const TABLE1_A25: [(f64, f64); 10] = [
    (1.060084e-03, 2.115485e-13),
    (2.778250e-03, 6.526663e-11),
    (7.184790e-03, 3.607348e-09),
    (1.608844e-02, 1.812161e-07),
    (2.879614e-02, 3.853128e-06),
    (6.751752e-02, 8.192757e-05),
    (1.117978e-01, 1.439033e-03),
    (2.518764e-01, 2.088023e-02),
    (3.723954e-01, 3.667548e-01),
    (6.229275e-01, 1.537079e+00),
];

// x^{-α}, α = 0.5 (first table, middle column pair).
const TABLE1_A50: [(f64, f64); 10] = [
    (1.263660e-04, 5.816049e-09),
    (1.318851e-04, 6.336196e-08),
    (2.177478e-03, 2.389865e-06),
    (1.423375e-02, 1.453310e-04),
    (3.605113e-02, 3.090116e-03),
    (4.002657e-02, 9.723689e-03),
    (7.561481e-02, 4.933185e-02),
    (2.411886e-01, 1.552328e-01),
    (3.672604e-01, 1.397038e+00),
    (2.193928e+00, 3.631519e+00),
];

// x^{-α}, α = 0.75 (first table, right column pair).
const TABLE1_A75: [(f64, f64); 10] = [
    (1.653295e-06, 1.135126e-08),
    (1.664949e-05, 6.273950e-07),
    (2.008706e-04, 1.954833e-05),
    (9.792299e-04, 2.343140e-04),
    (7.011612e-03, 2.808580e-03),
    (3.444878e-02, 3.059759e-02),
    (9.142663e-03, 6.570394e-02),
    (2.280614e-01, 3.333403e-01),
    (6.238136e+00, 8.579865e+00),
    (2.478274e+00, 1.842403e+01),
];

// exp(-x^α), α = 0.25, pinned exponential atoms (second table, left column pair).
const TABLE2_A25: [(f64, f64); 10] = [
    (3.684368e-02, 4.361538e-03),
    (4.849511e-02, 1.282650e-02),
    (1.017103e-01, 4.546295e-02),
    (1.241971e-01, 1.714882e-01),
    (1.319054e-01, 6.742622e-01),
    (6.933268e-02, 1.942175e+00),
    (1.337784e-01, 5.831305e+00),
    (1.251127e-01, 4.098384e+01),
    (8.343032e-02, 2.543346e+02),
    (1.409798e-01, 4.184289e+04),
];

// exp(-x^α), α = 0.5 (second table, middle column pair).
const TABLE2_A50: [(f64, f64); 10] = [
    (8.918599e-03, 4.939622e-02),
    (6.127055e-02, 1.064209e-01),
    (2.567263e-01, 2.821308e-01),
    (2.731277e-01, 9.794697e-01),
    (1.406392e-01, 2.821308e+00),
    (1.200802e-01, 8.296959e+00),
    (4.969377e-02, 2.491130e+01),
    (4.906249e-02, 7.959777e+01),
    (2.565896e-02, 4.452959e+02),
    (1.487512e-02, 3.471687e+04),
];

// exp(-x^α), α = 0.75 (second table, right column pair).
const TABLE2_A75: [(f64, f64); 10] = [
    (1.204240e-01, 3.772042e-01),
    (3.399225e-01, 6.078323e-01),
    (2.922859e-01, 1.180517e+00),
    (5.133306e-02, 2.024447e+00),
    (1.093081e-01, 3.400412e+00),
    (4.550720e-02, 8.648423e+00),
    (2.014393e-02, 2.066880e+01),
    (1.329286e-02, 5.479472e+01),
    (6.492292e-03, 2.940820e+02),
    (1.283043e-03, 3.400412e+04),
];
