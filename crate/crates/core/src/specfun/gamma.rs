use crate::real::Real;

/// Taylor coefficients of `1/Gamma(1+x)` about `x = 0`.
const RGAMMA1P: [f64; 27] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_48,
    -0.042_197_734_555_544_33,
    -0.009_621_971_527_876_973,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065_2,
    -0.000_215_241_674_114_950_98,
    0.000_128_050_282_388_116_2,
    -2.013_485_478_078_824e-5,
    -1.250_493_482_142_670_6e-6,
    1.133_027_231_981_696e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_02e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_6e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
    1.186_692_254_751_600_4e-18,
];

/// `1/Gamma(1+x)` for `|x| <= 1/2`.
pub(crate) fn rgamma1p<T: Real>(x: T) -> T {
    RGAMMA1P
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x + T::c(c))
}

/// Temme's auxiliary functions `((1/G(1-m) - 1/G(1+m))/(2m), (1/G(1-m) + 1/G(1+m))/2)`.
pub(crate) fn temme_gammas<T: Real>(mu: T) -> (T, T) {
    let mut gam1 = T::zero();
    let mut gam2 = T::zero();
    let mu2 = mu * mu;
    for (k, &c) in RGAMMA1P.iter().enumerate().rev() {
        if k % 2 == 1 {
            gam1 = gam1 * mu2 - T::c(c);
        } else {
            gam2 = gam2 * mu2 + T::c(c);
        }
    }
    (gam1, gam2)
}

/// `Gamma(n/2)` for a positive integer `n`.
pub(crate) fn gamma_half_integer<T: Real>(n: u32) -> T {
    assert!(n > 0, "Gamma(0) is a pole");
    let (mut g, mut arg) = if n % 2 == 0 {
        (T::one(), T::one())
    } else {
        (T::PI().sqrt(), T::c(0.5))
    };
    let target = T::c(f64::from(n) / 2.0);
    while arg < target {
        g = g * arg;
        arg = arg + T::one();
    }
    g
}
