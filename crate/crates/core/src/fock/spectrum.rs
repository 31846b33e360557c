use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Ascending eigenvalues with the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

/// Fraction of a truncated spectrum regarded as free of truncation error.
pub const REPORTED_FRACTION: f64 = 0.7;

pub fn eigenspectrum(h: &DMatrix<f64>) -> Spectrum {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
    Spectrum { values, vectors }
}

/// Number of levels `n ≤ 0.7·D` reported from a dimension-`D` spectrum.
pub fn reported_levels(dim: usize) -> usize {
    (REPORTED_FRACTION * dim as f64).floor() as usize + 1
}

/// `ΔE_n = (E_n − E_0) − n (E_1 − E_0)` for every supplied level; the first
/// two entries are zero by construction.
pub fn delta_e(energies: &[f64]) -> Vec<f64> {
    if energies.len() < 2 {
        return vec![0.0; energies.len()];
    }
    let e0 = energies[0];
    let gap = energies[1] - e0;
    energies
        .iter()
        .enumerate()
        .map(|(n, &e)| (e - e0) - n as f64 * gap)
        .collect()
}

/// Lowest [`reported_levels`] eigenvalues of `h`.
pub fn reported_energies(h: &DMatrix<f64>) -> Vec<f64> {
    let s = eigenspectrum(h);
    s.values.iter().take(reported_levels(h.nrows())).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_operator, Params, Symbol};
    use crate::fock::matrix_of;

    #[test]
    fn harmonic_spectrum_is_flat() {
        let h = matrix_of(&parse_operator("w*ad a + 0.5").unwrap(), &Params::single_mode(3.0, &[]), 30).unwrap();
        let de = delta_e(&reported_energies(&h));
        assert_eq!(de.len(), 22);
        assert!(de.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn kerr_spectrum_is_quadratic() {
        let params = Params::single_mode(1.0, &[]).with_symbol(Symbol::named("K"), 0.01);
        let h = matrix_of(&parse_operator("w*ad a + K/2*ad^2 a^2").unwrap(), &params, 40).unwrap();
        for (n, d) in delta_e(&reported_energies(&h)).into_iter().enumerate() {
            let n = n as f64;
            assert!((d - 0.005 * n * (n - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn vectors_follow_sorted_values() {
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = eigenspectrum(&h);
        assert!((s.values[0] - 1.0).abs() < 1e-14);
        let v = s.vectors.column(0);
        assert!((&h * v - v * 1.0).norm() < 1e-12);
    }
}
