//! Generating matrices for the digital nets analysed by this crate.
//!
//! Infinite generating matrices (Sobol', Faure) are truncated to their upper
//! left `m x m` block. All of them are upper triangular, or products
//! `L * P` with `L` lower triangular, so this block alone determines the
//! first `b^m` points to `m` digits.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{check_modulus, mul_mod, pow_mod, FieldMatrix};
use crate::poly::{fibonacci_poly, laurent_window, PolyFb};

/// Generating matrices `F_1, ..., F_d` (each `m x m` over F_b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSpec {
    pub b: u32,
    pub m: usize,
    pub matrices: Vec<FieldMatrix>,
    pub label: String,
    /// t-value asserted by the construction, if known.
    pub t_claimed: Option<u32>,
}

impl NetSpec {
    /// Validates a user-supplied list of square matrices over a common field.
    pub fn custom(matrices: Vec<FieldMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::invalid("a net needs at least one matrix"))?;
        let (b, m) = (first.modulus(), first.rows());
        if m == 0 {
            return Err(Error::invalid("generating matrices must be at least 1x1"));
        }
        for (j, f) in matrices.iter().enumerate() {
            if f.modulus() != b {
                return Err(Error::ModulusMismatch(b, f.modulus()));
            }
            if f.rows() != m || f.cols() != m {
                return Err(Error::dim(format!(
                    "matrix {j} is {}x{}, expected {m}x{m}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        Ok(Self {
            b,
            m,
            matrices,
            label: label.into(),
            t_claimed: None,
        })
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    /// Number of points, `b^m`, if it fits in a `u64`.
    pub fn num_points(&self) -> Option<u64> {
        (self.b as u64).checked_pow(self.m as u32)
    }

    fn with_claim(mut self, t: u32) -> Self {
        self.t_claimed = Some(t);
        self
    }
}

fn require_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::invalid("m must be at least 1"))
    } else {
        Ok(())
    }
}

/// van der Corput: `F_1 = I_m`.
pub fn vdc_matrices(b: u64, m: usize) -> Result<NetSpec> {
    require_m(m)?;
    Ok(NetSpec::custom(vec![FieldMatrix::identity(b, m)?], "vdc")?.with_claim(0))
}

/// Hammersley: identity and anti-diagonal identity.
pub fn hammersley_matrices(b: u64, m: usize) -> Result<NetSpec> {
    require_m(m)?;
    let mats = vec![FieldMatrix::identity(b, m)?, FieldMatrix::anti_identity(b, m)?];
    Ok(NetSpec::custom(mats, "hammersley")?.with_claim(0))
}

/// Larcher-Pillichshammer net: `F_1 = I`, and row `k` (1-based) of `F_2`
/// has ones in columns `1..=m-k+1`.
pub fn lp_matrices(b: u64, m: usize) -> Result<NetSpec> {
    require_m(m)?;
    let f2 = FieldMatrix::from_fn(b, m, m, |i, j| (i + j < m) as u64)?;
    Ok(NetSpec::custom(vec![FieldMatrix::identity(b, m)?, f2], "lp")?.with_claim(0))
}

/// `C(n, k) mod b` by Lucas's theorem.
pub fn binom_mod(mut n: u64, mut k: u64, b: u32) -> u32 {
    let bb = b as u64;
    let mut acc = 1u32;
    while k > 0 || n > 0 {
        let (nd, kd) = ((n % bb) as u32, (k % bb) as u32);
        if kd > nd {
            return 0;
        }
        acc = mul_mod(acc, small_binom(nd, kd, b), b);
        n /= bb;
        k /= bb;
    }
    acc
}

/// `C(n, k) mod b` for `k <= n < b`.
fn small_binom(n: u32, k: u32, b: u32) -> u32 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u32, 1u32);
    for i in 0..k {
        num = mul_mod(num, n - i, b);
        den = mul_mod(den, i + 1, b);
    }
    mul_mod(num, pow_mod(den, b as u64 - 2, b), b)
}

/// `P^k` with `(P^k)_{i,j} = k^{j-i} C(j-1, i-1) mod b` for `j >= i`
/// (1-based); `k = 0` gives the identity.
pub fn pascal_power_matrix(b: u64, m: usize, k: u32) -> Result<FieldMatrix> {
    let bb = check_modulus(b)?;
    if k >= bb {
        return Err(Error::OutOfRange(format!("Pascal power {k} must be below b = {b}")));
    }
    FieldMatrix::from_fn(b, m, m, |i, j| {
        if j < i {
            0
        } else {
            let scale = if j == i { 1 } else { pow_mod(k, (j - i) as u64, bb) };
            mul_mod(scale, binom_mod(j as u64, i as u64, bb), bb) as u64
        }
    })
}

/// Faure net in base `b`: `d = b` matrices `I, P, ..., P^{b-1}`.
pub fn faure_matrices(b: u64, m: usize) -> Result<NetSpec> {
    require_m(m)?;
    let bb = check_modulus(b)?;
    let mats = (0..bb)
        .map(|k| pascal_power_matrix(b, m, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(NetSpec::custom(mats, "faure")?.with_claim(0))
}

/// The two linear scrambles of the 2-d Sobol' pair that are analysed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ScrambleVariant {
    /// `(C_1, C_2) = (L, P)`
    #[serde(rename = "L,P")]
    LP,
    /// `(C_1, C_2) = (I, L P)`
    #[serde(rename = "I,LP")]
    ILP,
}

impl ScrambleVariant {
    pub fn name(self) -> &'static str {
        match self {
            ScrambleVariant::LP => "L,P",
            ScrambleVariant::ILP => "I,LP",
        }
    }
}

/// Base-2 Sobol' pair scrambled by a nonsingular lower-triangular `L`.
pub fn sobol2_scrambled(m: usize, l: &FieldMatrix, variant: ScrambleVariant) -> Result<NetSpec> {
    require_m(m)?;
    if l.modulus() != 2 || l.rows() != m || l.cols() != m {
        return Err(Error::invalid(format!("L must be {m}x{m} over F_2")));
    }
    let lower_unit = (0..m).all(|i| l.get(i, i) == 1 && (i + 1..m).all(|j| l.get(i, j) == 0));
    if !lower_unit {
        return Err(Error::invalid("L must be lower triangular and nonsingular"));
    }
    let p = pascal_power_matrix(2, m, 1)?;
    let mats = match variant {
        ScrambleVariant::LP => vec![l.clone(), p],
        ScrambleVariant::ILP => vec![FieldMatrix::identity(2, m)?, l.mul(&p)?],
    };
    let label = format!("sobol2[{}]", variant.name());
    Ok(NetSpec::custom(mats, label)?.with_claim(0))
}

/// Unit lower-triangular matrix with i.i.d. uniform entries below the diagonal.
pub fn random_lower_unit<R: Rng + ?Sized>(b: u64, m: usize, rng: &mut R) -> Result<FieldMatrix> {
    let bb = check_modulus(b)?;
    FieldMatrix::from_fn(b, m, m, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Greater => rng.random_range(0..bb) as u64,
        std::cmp::Ordering::Less => 0,
    })
}

/// Polynomial lattice `Q(p, (q_1, ..., q_d))`: `(F_j)_{k,l} = u_{k+l-1}` where
/// `q_j/p = sum u_i x^{-i}`; `m = deg p`.
pub fn polylattice_matrices(p: &PolyFb, qs: &[PolyFb]) -> Result<NetSpec> {
    let m = p.degree().ok_or(Error::ZeroDivisor)?;
    require_m(m)?;
    if qs.is_empty() {
        return Err(Error::invalid("at least one numerator polynomial is required"));
    }
    let mats = qs
        .iter()
        .map(|q| {
            if q.modulus() != p.modulus() {
                return Err(Error::ModulusMismatch(p.modulus(), q.modulus()));
            }
            // the polynomial part of q/p only contributes u_i with i <= 0
            let (_, r) = q.divmod(p)?;
            let u = laurent_window(&r, p, 1, 2 * m - 1);
            FieldMatrix::from_fn(p.modulus() as u64, m, m, |k, l| u[k + l] as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    NetSpec::custom(mats, "polylattice")
}

/// Fibonacci polynomial lattice `Q(f_{m+1}, (1, f_m))` over F_2.
pub fn fibonacci_lattice_matrices(m: usize) -> Result<NetSpec> {
    require_m(m)?;
    let p = fibonacci_poly(m + 1)?;
    let qs = [PolyFb::one(2)?, fibonacci_poly(m)?];
    let mut spec = polylattice_matrices(&p, &qs)?;
    spec.label = "fiblattice".into();
    Ok(spec.with_claim(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::laurent_expand;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_constructions() {
        assert_eq!(
            vdc_matrices(2, 3).unwrap().matrices[0],
            FieldMatrix::identity(2, 3).unwrap()
        );
        let h = hammersley_matrices(3, 4).unwrap();
        assert_eq!(
            h.matrices[1].mul(&h.matrices[1]).unwrap(),
            FieldMatrix::identity(3, 4).unwrap()
        );
        let lp = lp_matrices(2, 2).unwrap();
        assert_eq!(
            lp.matrices[1],
            FieldMatrix::from_rows(2, &[vec![1, 1], vec![1, 0]]).unwrap()
        );
        let lp4 = lp_matrices(5, 4).unwrap();
        assert_eq!(lp4.matrices[1].row(0), &[1, 1, 1, 1]);
        assert_eq!(lp4.matrices[1].row(3), &[1, 0, 0, 0]);
        assert!(vdc_matrices(2, 0).is_err());
        assert!(lp_matrices(4, 3).is_err());
    }

    #[test]
    fn binomials_by_lucas() {
        let exact = |n: u64, k: u64| -> u128 { (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) };
        for &b in &[2u32, 3, 5, 7] {
            for n in 0..40u64 {
                for k in 0..=n {
                    assert_eq!(
                        binom_mod(n, k, b) as u128,
                        exact(n, k) % b as u128,
                        "C({n},{k}) mod {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn pascal_examples() {
        assert_eq!(
            pascal_power_matrix(2, 3, 1).unwrap(),
            FieldMatrix::from_rows(2, &[vec![1, 1, 1], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()
        );
        assert_eq!(
            pascal_power_matrix(7, 5, 0).unwrap(),
            FieldMatrix::identity(7, 5).unwrap()
        );
        let p = pascal_power_matrix(5, 8, 1).unwrap();
        let p3 = p.mul(&p).unwrap().mul(&p).unwrap();
        assert_eq!(pascal_power_matrix(5, 8, 3).unwrap(), p3);
        assert!(pascal_power_matrix(3, 4, 3).is_err());
    }

    #[test]
    fn faure_shapes() {
        let f = faure_matrices(3, 2).unwrap();
        assert_eq!(f.d(), 3);
        assert_eq!(f.matrices[0], FieldMatrix::identity(3, 2).unwrap());
        let f2 = faure_matrices(2, 6).unwrap();
        let sobol = sobol2_scrambled(6, &FieldMatrix::identity(2, 6).unwrap(), ScrambleVariant::LP).unwrap();
        assert_eq!(f2.matrices, sobol.matrices);
    }

    #[test]
    fn scramble_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = random_lower_unit(2, 5, &mut rng).unwrap();
        assert!(sobol2_scrambled(5, &l, ScrambleVariant::ILP).is_ok());
        let mut bad = l.clone();
        bad.set(0, 4, 1);
        assert!(sobol2_scrambled(5, &bad, ScrambleVariant::LP).is_err());
        let mut singular = l;
        singular.set(2, 2, 0);
        assert!(sobol2_scrambled(5, &singular, ScrambleVariant::LP).is_err());
    }

    #[test]
    fn polylattice_against_laurent() {
        let x2 = PolyFb::monomial(2, 2).unwrap();
        let s = polylattice_matrices(&x2, &[PolyFb::one(2).unwrap()]).unwrap();
        assert_eq!(
            s.matrices[0],
            FieldMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap()
        );

        // x^{m-1}/x^m = x^{-1}: u_1 = 1 only, so F is e_1 e_1^T
        let m = 5;
        let s = polylattice_matrices(&PolyFb::monomial(3, m).unwrap(), &[PolyFb::monomial(3, m - 1).unwrap()]).unwrap();
        let l = laurent_expand(
            &PolyFb::monomial(3, m - 1).unwrap(),
            &PolyFb::monomial(3, m).unwrap(),
            2 * m,
        )
        .unwrap();
        for k in 0..m {
            for j in 0..m {
                assert_eq!(s.matrices[0].get(k, j), l.coeff((k + j + 1) as i64).unwrap());
            }
        }

        // numerators of higher degree than p only lose their polynomial part
        let p = PolyFb::new(3, &[1, 2, 0, 1]).unwrap();
        let q = PolyFb::new(3, &[2, 1, 1, 2, 1]).unwrap();
        let (_, r) = q.divmod(&p).unwrap();
        assert_eq!(
            polylattice_matrices(&p, &[q]).unwrap(),
            polylattice_matrices(&p, &[r]).unwrap()
        );
    }

    #[test]
    fn fibonacci_lattice_structure() {
        let s = fibonacci_lattice_matrices(15).unwrap();
        assert_eq!(s.matrices[0], FieldMatrix::anti_identity(2, 15).unwrap());
        for k in 1..=6 {
            let m = (1usize << k) - 1;
            let s = fibonacci_lattice_matrices(m).unwrap();
            for i in 1..=m {
                for j in 1..=m {
                    let want = (i + j).is_power_of_two() as u32;
                    assert_eq!(s.matrices[1].get(i - 1, j - 1), want, "m={m} ({i},{j})");
                }
            }
        }
    }
}
