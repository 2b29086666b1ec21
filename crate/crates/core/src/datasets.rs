//! Built-in lifetime datasets.

/// Failure times of 30 devices (Meeker and Escobar); eight units reached
/// the end of the test at 300.
pub const MEEKER_ESCOBAR: [f64; 30] = [
    2.0, 10.0, 13.0, 23.0, 23.0, 28.0, 30.0, 65.0, 80.0, 88.0, 106.0, 143.0, 147.0, 173.0, 181.0, 212.0, 245.0,
    247.0, 261.0, 266.0, 275.0, 293.0, 300.0, 300.0, 300.0, 300.0, 300.0, 300.0, 300.0, 300.0,
];

/// Times to failure (thousands of hours) of 40 turbochargers of one engine type (Xu et al.).
pub const TURBOCHARGER: [f64; 40] = [
    1.6, 2.0, 2.6, 3.0, 3.5, 3.9, 4.5, 4.6, 4.8, 5.0, 5.1, 5.3, 5.4, 5.6, 5.8, 6.0, 6.0, 6.1, 6.3, 6.5, 6.5, 6.7,
    7.0, 7.1, 7.3, 7.3, 7.3, 7.7, 7.7, 7.8, 7.9, 8.0, 8.1, 8.3, 8.4, 8.4, 8.5, 8.7, 8.8, 9.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dataset {
    pub name: &'static str,
    pub source: &'static str,
    pub values: &'static [f64],
}

pub const BUILTINS: [Dataset; 2] = [
    Dataset {
        name: "meeker",
        source: "Meeker, W. Q. and Escobar, L. A. (1998). Statistical Methods for Reliability Data. Wiley, p. 383",
        values: &MEEKER_ESCOBAR,
    },
    Dataset {
        name: "turbocharger",
        source: "Xu, K., Xie, M., Tang, L. C. and Ho, S. L. (2003). Application of neural networks in forecasting engine systems reliability. Applied Soft Computing",
        values: &TURBOCHARGER,
    },
];

/// Look up a built-in dataset by name (case-insensitive).
pub fn builtin(name: &str) -> Option<&'static Dataset> {
    BUILTINS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}
