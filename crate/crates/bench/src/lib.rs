//! Fixture forms shared by the benchmarks.

pub const BINARY_QUARTIC: &str = "x1^4+x2^4+6*x1^2*x2^2";

pub const TERNARY_CUBIC: &str = "x1^3+x2^3+x3^3+6*x1*x2*x3";

pub const CUBIC_WITH_SQRT2: &str =
    "x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3";

pub const QUARTIC_TWO_BLOCKS: &str = "x1^4+4*x1^3*x2+4*x1^3*x3+4*x1^3*x4-12*x1^2*x2^2+12*x1^2*x2*x3-24*x1^2*x2*x4-12*x1^2*x3^2-24*x1^2*x3*x4+24*x1^2*x4^2+4*x1*x2^3-24*x1*x2^2*x3+12*x1*x2^2*x4-24*x1*x2*x3^2+96*x1*x2*x3*x4-24*x1*x2*x4^2+4*x1*x3^3+12*x1*x3^2*x4-24*x1*x3*x4^2+4*x1*x4^3+x2^4+4*x2^3*x3+4*x2^3*x4+24*x2^2*x3^2-24*x2^2*x3*x4-12*x2^2*x4^2+4*x2*x3^3-24*x2*x3^2*x4+12*x2*x3*x4^2+4*x2*x4^3+x3^4+4*x3^3*x4-12*x3^2*x4^2+4*x3*x4^3+x4^4";
