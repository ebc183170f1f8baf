//! Gauss-Kronrod rule pairs.
//!
//! Nested rule evaluation in the classic QUADPACK arrangement: the
//! embedded Gauss result is compared against the Kronrod extension and
//! the difference, rescaled against the integrand's variation, gives the
//! error estimate.

/// Result of one rule application on a single interval.
#[derive(Debug, Clone, Copy)]
pub struct RuleResult {
    pub value: f64,
    pub abs_error: f64,
    /// Integral of |f| over the interval.
    pub res_abs: f64,
    /// Integral of |f - mean| over the interval (integrand variation).
    pub res_asc: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn qk<F>(f: &F, a: f64, b: f64, xgk: &[f64], wg: &[f64], wgk: &[f64]) -> RuleResult
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let n = xgk.len();
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    let abs_half_len = half_len.abs();
    let f_center = f(center);

    let mut fv1 = vec![0.0; n - 1];
    let mut fv2 = vec![0.0; n - 1];

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * wgk[n - 1];
    let mut res_abs = res_kronrod.abs();

    if n % 2 == 0 {
        res_gauss = f_center * wg[n / 2 - 1];
    }

    for (j, w_gauss) in wg.iter().enumerate().take((n - 1) / 2) {
        let jtw = j * 2 + 1;
        let abscissa = half_len * xgk[jtw];
        let fval1 = f(center - abscissa);
        let fval2 = f(center + abscissa);
        fv1[jtw] = fval1;
        fv2[jtw] = fval2;
        res_gauss += w_gauss * (fval1 + fval2);
        res_kronrod += wgk[jtw] * (fval1 + fval2);
        res_abs += wgk[jtw] * (fval1.abs() + fval2.abs());
    }

    for j in 0..(n / 2) {
        let jtwm1 = j * 2;
        let abscissa = half_len * xgk[jtwm1];
        let fval1 = f(center - abscissa);
        let fval2 = f(center + abscissa);
        fv1[jtwm1] = fval1;
        fv2[jtwm1] = fval2;
        res_kronrod += wgk[jtwm1] * (fval1 + fval2);
        res_abs += wgk[jtwm1] * (fval1.abs() + fval2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = wgk[n - 1] * (f_center - mean).abs();
    for j in 0..(n - 1) {
        res_asc += wgk[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half_len;
    res_abs *= abs_half_len;
    res_asc *= abs_half_len;

    RuleResult {
        value: res_kronrod * half_len,
        abs_error: rescale_error(err, res_abs, res_asc),
        res_abs,
        res_asc,
    }
}

/// 15-point Kronrod rule with embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
pub fn qk15<F>(f: &F, a: f64, b: f64) -> RuleResult
where
    F: Fn(f64) -> f64 + ?Sized,
{
    const XGK: [f64; 8] = [
        0.991_455_371_120_812_639_206_854_697_526_329,
        0.949_107_912_342_758_524_526_189_684_047_851,
        0.864_864_423_359_769_072_789_712_788_640_926,
        0.741_531_185_599_394_439_863_864_773_280_788,
        0.586_087_235_467_691_130_294_144_838_258_730,
        0.405_845_151_377_397_166_906_606_412_076_961,
        0.207_784_955_007_898_467_600_689_403_773_245,
        0.000_000_000_000_000_000_000_000_000_000_000,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_693_270_611_432_679_082,
        0.279_705_391_489_276_667_901_467_771_423_780,
        0.381_830_050_505_118_944_950_369_775_488_975,
        0.417_959_183_673_469_387_755_102_040_816_327,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_224_963_732_008_058_970,
        0.063_092_092_629_978_553_290_700_663_189_204,
        0.104_790_010_322_250_183_839_876_322_541_518,
        0.140_653_259_715_525_918_745_189_590_510_238,
        0.169_004_726_639_267_902_826_583_426_598_550,
        0.190_350_578_064_785_409_913_256_402_421_014,
        0.204_432_940_075_298_892_414_161_999_234_649,
        0.209_482_141_084_727_828_012_999_174_891_714,
    ];
    qk(f, a, b, &XGK, &WG, &WGK)
}

/// 21-point Kronrod rule with embedded 10-point Gauss rule.
#[allow(clippy::excessive_precision)]
pub fn qk21<F>(f: &F, a: f64, b: f64) -> RuleResult
where
    F: Fn(f64) -> f64 + ?Sized,
{
    const XGK: [f64; 11] = [
        0.995_657_163_025_808_080_735_527_280_689_003,
        0.973_906_528_517_171_720_077_964_012_084_452,
        0.930_157_491_355_708_226_001_207_180_059_508,
        0.865_063_366_688_984_510_732_096_688_423_493,
        0.780_817_726_586_416_897_063_717_578_345_042,
        0.679_409_568_299_024_406_234_327_365_114_874,
        0.562_757_134_668_604_683_339_000_099_272_694,
        0.433_395_394_129_247_190_799_265_943_165_784,
        0.294_392_862_701_460_198_131_126_603_103_866,
        0.148_874_338_981_631_210_884_826_001_129_720,
        0.000_000_000_000_000_000_000_000_000_000_000,
    ];
    const WG: [f64; 5] = [
        0.066_671_344_308_688_137_593_568_809_893_332,
        0.149_451_349_150_580_593_145_776_339_657_697,
        0.219_086_362_515_982_043_995_534_934_228_163,
        0.269_266_719_309_996_355_091_226_921_569_469,
        0.295_524_224_714_752_870_173_892_994_651_338,
    ];
    const WGK: [f64; 11] = [
        0.011_694_638_867_371_874_278_064_396_062_192,
        0.032_558_162_307_964_727_478_818_972_459_390,
        0.054_755_896_574_351_996_031_381_300_244_580,
        0.075_039_674_810_919_952_767_043_140_916_190,
        0.093_125_454_583_697_605_535_065_465_083_366,
        0.109_387_158_802_297_641_899_210_590_325_805,
        0.123_491_976_262_065_851_077_958_109_831_074,
        0.134_709_217_311_473_325_928_054_001_771_707,
        0.142_775_938_577_060_080_797_094_273_138_717,
        0.147_739_104_901_338_491_374_841_515_972_068,
        0.149_445_554_002_916_905_664_936_468_389_821,
    ];
    qk(f, a, b, &XGK, &WG, &WGK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_on_low_order_polynomials() {
        // The 7-point Gauss part alone is exact up to degree 13.
        let r = qk15(&|x: f64| 3.0 * x * x, 0.0, 2.0);
        assert_relative_eq!(r.value, 8.0, epsilon = 1e-13);
        let r = qk21(&|x: f64| x.powi(5) - x, -1.0, 3.0);
        assert_relative_eq!(r.value, (3.0_f64.powi(6) - 1.0) / 6.0 - 4.0, epsilon = 1e-11);
    }

    #[test]
    fn error_estimate_bounds_true_error_on_smooth_integrands() {
        let r = qk21(&|x: f64| x.exp() * (3.0 * x).sin(), 0.0, 2.0);
        let exact = (2.0_f64.exp() * ((3.0 * 2.0f64).sin() - 3.0 * (6.0f64).cos()) + 3.0) / 10.0;
        assert!((r.value - exact).abs() <= 3.0 * r.abs_error.max(1e-14));
    }

    #[test]
    fn orientation_flips_sign() {
        let fwd = qk15(&|x: f64| x.cos(), 0.0, 1.0);
        let bwd = qk15(&|x: f64| x.cos(), 1.0, 0.0);
        assert_relative_eq!(fwd.value, -bwd.value, epsilon = 1e-15);
    }
}
