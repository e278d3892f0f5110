//! Real exponential integral `Ei(z) = PV int_{-inf}^z e^t / t dt`.

use super::FlowError;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 40.0;

/// `Ei(z)` for `z > 0`.
pub fn exp_integral_ei(z: f64) -> Result<f64, FlowError> {
    if !z.is_finite() || z <= 0.0 {
        return Err(FlowError::DomainError { z });
    }
    if z <= SERIES_LIMIT {
        // gamma + ln z + sum z^n / (n n!); every term is positive
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..500 {
            let nf = n as f64;
            term *= z / nf;
            let add = term / nf;
            sum += add;
            if add < sum * 1e-17 {
                break;
            }
        }
        Ok(EULER_GAMMA + z.ln() + sum)
    } else {
        // e^z / z sum k! / z^k, truncated at the smallest term
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let next = term * k as f64 / z;
            if next >= term || next < 1e-18 {
                break;
            }
            term = next;
            sum += term;
        }
        Ok(z.exp() / z * sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let cases = [
            (1.0, 1.895_117_816_355_936_8),
            (2.0, 4.954_234_356_001_89),
            (0.5, 0.454_219_904_863_173_6),
            (10.0, 2_492.228_976_241_877_8),
            (41.0, 1.600_664_914_324_504e16),
            (60.0, 1.936_182_213_929_276_5e24),
        ];
        for (z, want) in cases {
            let got = exp_integral_ei(z).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-13,
                "Ei({z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let below = exp_integral_ei(SERIES_LIMIT).unwrap();
        let above = exp_integral_ei(SERIES_LIMIT * (1.0 + 1e-15)).unwrap();
        assert!(((below - above) / below).abs() < 1e-12);
    }

    #[test]
    fn small_argument_limit() {
        let z: f64 = 1e-10;
        assert!((exp_integral_ei(z).unwrap() - (EULER_GAMMA + z.ln())).abs() < 1e-9);
    }

    #[test]
    fn domain() {
        assert!(matches!(
            exp_integral_ei(0.0),
            Err(FlowError::DomainError { .. })
        ));
        assert!(exp_integral_ei(-1.0).is_err());
        assert!(exp_integral_ei(f64::NAN).is_err());
    }
}
