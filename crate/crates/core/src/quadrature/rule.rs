//! 15-point Gauss-Kronrod panel rule with the embedded 7-point Gauss rule.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Kronrod abscissae on [-1, 1], non-negative half; odd indices are the
/// Gauss-7 nodes.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss-7 weights for XGK[1], XGK[3], XGK[5], XGK[7].
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integrand values the rules can accumulate: reals and complex numbers.
pub trait Value: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl Value for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Value for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Nodes of the 15-point rule mapped to [a, b], in increasing order.
pub(crate) fn kronrod_nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; 15];
    for j in 0..7 {
        out[j] = c - h * XGK[j];
        out[14 - j] = c + h * XGK[j];
    }
    out[7] = c;
    out
}

/// Kronrod and Gauss weights aligned with [`kronrod_nodes`]; Gauss weight is
/// zero at the pure Kronrod nodes.
pub(crate) fn aligned_weights() -> ([f64; 15], [f64; 15]) {
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for j in 0..7 {
        wk[j] = WGK[j];
        wk[14 - j] = WGK[j];
        if j % 2 == 1 {
            wg[j] = WG[j / 2];
            wg[14 - j] = WG[j / 2];
        }
    }
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (wk, wg)
}

/// Result of one panel: Kronrod value, Gauss value and ∫|f| estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PanelEstimate<T> {
    pub kronrod: T,
    pub gauss: T,
    pub abs_integral: f64,
}

impl<T: Value> PanelEstimate<T> {
    pub fn error(&self) -> f64 {
        (self.kronrod - self.gauss).magnitude()
    }
}

pub(crate) fn gk15<T: Value, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> PanelEstimate<T> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kr = fc * WGK[7];
    let mut ga = fc * WG[3];
    let mut abs = fc.magnitude() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        let s = f1 + f2;
        kr = kr + s * WGK[j];
        abs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            ga = ga + s * WG[j / 2];
        }
    }
    PanelEstimate {
        kronrod: kr * h,
        gauss: ga * h,
        abs_integral: abs * h.abs(),
    }
}
