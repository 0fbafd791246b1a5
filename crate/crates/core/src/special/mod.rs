//! Gamma and Mittag-Leffler functions.

mod contour;
mod gamma;
mod imag_table;
mod mittag_leffler;

pub use gamma::{gamma, ln_gamma, recip_gamma, GAMMA_MAX_ARG};
pub use mittag_leffler::{
    mittag_leffler, ml_decay_ratio, ml_decay_ratio_with, MLParams, MittagLeffler, Route, SERIES_RADIUS,
};
