use num_complex::Complex64 as C64;

use super::{CoinOperator, InnerCoin};
use crate::linalg::ComplexMatrix;

/// `exp(-i m ε σ₁)`.
pub fn dirac_coin(m: f64, eps: f64) -> CoinOperator {
    assert!(eps > 0.0, "eps must be positive");
    CoinOperator::new(InnerCoin::from_mass(m, eps).matrix(), 1, 1).expect("2x2 coin")
}

/// First-order scheme `[[1, -iεm], [-iεm, 1]]`. Not unitary unless `mε = 0`.
pub fn fd_dirac_coin(m: f64, eps: f64) -> CoinOperator {
    assert!(eps > 0.0, "eps must be positive");
    let one = C64::new(1.0, 0.0);
    let off = C64::new(0.0, -eps * m);
    let matrix = ComplexMatrix::from_rows(&[vec![one, off], vec![off, one]]);
    let unitary = m * eps == 0.0;
    CoinOperator { matrix, plus_dim: 1, minus_dim: 1, unitary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TOL;

    // Taylor series of exp(A), summed until terms are negligible.
    fn expm_series(a: &ComplexMatrix) -> ComplexMatrix {
        let mut term = ComplexMatrix::identity(a.rows());
        let mut sum = term.clone();
        for k in 1..60 {
            term = term.matmul(a).scale(C64::new(1.0 / k as f64, 0.0));
            sum = ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| sum.get(i, j) + term.get(i, j));
        }
        sum
    }

    #[test]
    fn massless_coin_is_identity() {
        assert!(dirac_coin(0.0, 0.3).matrix.max_abs_diff(&ComplexMatrix::identity(2)) < TOL);
        assert!(fd_dirac_coin(0.0, 0.3).matrix.max_abs_diff(&ComplexMatrix::identity(2)) < TOL);
        assert!(fd_dirac_coin(0.0, 0.3).unitary);
    }

    #[test]
    fn quarter_turn() {
        let c = dirac_coin(std::f64::consts::FRAC_PI_2, 1.0).matrix;
        let expect = ComplexMatrix::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, -1.0), C64::new(0.0, 0.0)],
        ]);
        assert!(c.max_abs_diff(&expect) < TOL);
    }

    #[test]
    fn matches_exponential_series() {
        for (m, eps) in [(1.0, 0.1), (2.5, 0.07), (-0.3, 0.9)] {
            let gen = ComplexMatrix::sigma1().scale(C64::new(0.0, -m * eps));
            let c = dirac_coin(m, eps);
            assert!(c.matrix.max_abs_diff(&expm_series(&gen)) < 1e-14);
            assert!(c.unitary);
        }
        assert!((dirac_coin(1.0, 0.1).matrix.get(0, 0).re - 0.1f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn fd_coin_entries_and_defect() {
        let f = fd_dirac_coin(1.0, 0.1);
        assert!(!f.unitary);
        assert!((f.matrix.get(0, 1) - C64::new(0.0, -0.1)).norm() < 1e-15);
        // M†M = (1 + ε²m²) Id by direct multiplication
        let mm = f.matrix.dagger().matmul(&f.matrix);
        assert!((mm.get(0, 0).re - 1.01).abs() < 1e-15);
        assert!(mm.get(0, 1).norm() < 1e-15);
        assert!((f.matrix.unitarity_defect() - 0.01).abs() < 1e-14);
    }

    #[test]
    fn fd_and_exact_coins_differ_at_second_order() {
        let xs: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].to_vec();
        let ys: Vec<f64> =
            xs.iter().map(|&me| dirac_coin(me, 1.0).matrix.max_abs_diff(&fd_dirac_coin(me, 1.0).matrix)).collect();
        let fit = crate::analysis::order_fit::fit_loglog(&xs, &ys).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.1, "slope {}", fit.slope);
    }
}
