//! sl_2 tensor-product arithmetic over F_p and polynomial solutions of the
//! two-point KZ equations built from F_p-hypergeometric integrals.

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{domain, singular, Error, Result};
use crate::fpintegral::{fp_integral_partial, vandermonde_power, Cycle};
use crate::modarith::{FpElement, PrimeField, ProjectedQuotient};
use crate::polyring::FpPoly;

/// Parameters `(p, m1, m2, n, kappa)` with the derived residues
/// `M1 = -m1/kappa`, `M2 = -m2/kappa`, `M12 = m1 m2 / (2 kappa)`, `c = 1/kappa`,
/// each the least positive representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KZParams {
    pub field: PrimeField,
    pub m1: u64,
    pub m2: u64,
    pub n: u64,
    pub kappa_num: i64,
    pub kappa_den: i64,
    pub big_m1: u64,
    pub big_m2: u64,
    pub big_m12: u64,
    pub c: u64,
}

impl KZParams {
    pub fn new(field: &PrimeField, m1: u64, m2: u64, n: u64, kappa_num: i64, kappa_den: i64) -> Result<Self> {
        let p = field.p();
        if m1 == 0 || m2 == 0 || m1 >= p || m2 >= p {
            return Err(domain!("m1 = {m1}, m2 = {m2} must lie in [1, p-1] for p = {p}"));
        }
        if n > m1.min(m2) {
            return Err(domain!("n = {n} exceeds min(m1, m2) = {}", m1.min(m2)));
        }
        if kappa_den == 0 {
            return Err(domain!("kappa has zero denominator"));
        }
        let g = kappa_num.gcd(&kappa_den);
        let sign = if kappa_den < 0 { -1 } else { 1 };
        let (num, den) = (sign * kappa_num / g.max(1), sign * kappa_den / g.max(1));
        if num % p as i64 == 0 || den % p as i64 == 0 {
            return Err(domain!("kappa = {num}/{den} must have numerator and denominator prime to {p}"));
        }
        let kappa_inv = field.elem_i64(den).try_div(&field.elem_i64(num))?;
        let half = field.elem(p.div_ceil(2));
        let c = kappa_inv.value();
        let big_m1 = (-(field.elem(m1) * &kappa_inv)).value();
        let big_m2 = (-(field.elem(m2) * &kappa_inv)).value();
        let big_m12 = (field.elem(m1 * m2) * &kappa_inv * half).value();
        Ok(Self {
            field: field.clone(),
            m1,
            m2,
            n,
            kappa_num: num,
            kappa_den: den,
            big_m1,
            big_m2,
            big_m12,
            c,
        })
    }

    /// `kappa` as a residue.
    pub fn kappa(&self) -> FpElement {
        let f = &self.field;
        f.elem_i64(self.kappa_num) * f.elem_i64(self.kappa_den).inv().expect("denominator prime to p")
    }

    /// Hypotheses of the closed-form theorem: `n >= 1` and
    /// `M_i + (n-1)c < p`, `p <= M1 + M2 + (n-1)c`, `M1 + M2 + (2n-2)c < 2p - 1`.
    pub fn theorem71_regime(&self) -> bool {
        let (p, n, c) = (self.field.p(), self.n, self.c);
        n >= 1
            && self.big_m1 + (n - 1) * c < p
            && self.big_m2 + (n - 1) * c < p
            && p <= self.big_m1 + self.big_m2 + (n - 1) * c
            && self.big_m1 + self.big_m2 + (2 * n - 2) * c < 2 * p - 1
    }
}

/// `sum_r u_r f^r v_{m1} (x) f^{n-r} v_{m2}`, each `u_r` in `F_p[z1, z2]`.
/// A weight drop of `-1` denotes the empty vector produced by lowering past the top.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector {
    pub field: PrimeField,
    pub m1: u64,
    pub m2: u64,
    pub n: i64,
    pub entries: Vec<FpPoly>,
}

impl TensorVector {
    pub fn zero(field: &PrimeField, m1: u64, m2: u64, n: i64) -> Self {
        let len = (n + 1).max(0) as usize;
        Self { field: field.clone(), m1, m2, n, entries: vec![FpPoly::zero(field, 2); len] }
    }

    /// The basis vector `f^r v_{m1} (x) f^{n-r} v_{m2}` with constant coefficient 1.
    pub fn basis(field: &PrimeField, m1: u64, m2: u64, n: i64, r: usize) -> Result<Self> {
        let mut v = Self::zero(field, m1, m2, n);
        if r >= v.entries.len() || r as u64 > m1 || (n as u64 - r as u64) > m2 {
            return Err(domain!("no basis vector r = {r} in weight drop {n} of V_{m1} x V_{m2}"));
        }
        v.entries[r] = FpPoly::one(field, 2);
        Ok(v)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FpPoly::is_zero)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if (self.m1, self.m2, self.n) != (other.m1, other.m2, other.n) || self.field != other.field {
            return Err(Error::Type("tensor vectors live in different spaces".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(Self { entries, ..self.clone() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&self.field.elem(self.field.p() - 1)))
    }

    pub fn scale(&self, k: &FpElement) -> Self {
        Self { entries: self.entries.iter().map(|e| e.scale(&k.value())).collect(), ..self.clone() }
    }

    fn map_entries(&self, f: impl Fn(&FpPoly) -> Result<FpPoly>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<_>>()?;
        Ok(Self { entries, ..self.clone() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
    Both,
}

/// Applies `e`, `f` or `h` in one tensor slot or in both (the coproduct).
pub fn sl2_tensor_action(gen: Generator, slot: Slot, v: &TensorVector) -> TensorVector {
    if slot == Slot::Both {
        let a = sl2_tensor_action(gen, Slot::First, v);
        let b = sl2_tensor_action(gen, Slot::Second, v);
        return a.try_add(&b).expect("same space");
    }
    let f = &v.field;
    let (m1, m2, n) = (v.m1 as i64, v.m2 as i64, v.n);
    let first = slot == Slot::First;
    let coeff = |k: i64| f.elem_i64(k).value();
    match gen {
        Generator::H => {
            let mut out = v.clone();
            for (r, e) in out.entries.iter_mut().enumerate() {
                let r = r as i64;
                let w = if first { m1 - 2 * r } else { m2 - 2 * (n - r) };
                *e = e.scale(&coeff(w));
            }
            out
        }
        Generator::E => {
            let mut out = TensorVector::zero(f, v.m1, v.m2, n - 1);
            for (r, e) in v.entries.iter().enumerate() {
                let r = r as i64;
                if first && r >= 1 {
                    let t = &out.entries[(r - 1) as usize] + &e.scale(&coeff(r * (m1 - r + 1)));
                    out.entries[(r - 1) as usize] = t;
                } else if !first && n - r >= 1 {
                    let k = n - r;
                    let t = &out.entries[r as usize] + &e.scale(&coeff(k * (m2 - k + 1)));
                    out.entries[r as usize] = t;
                }
            }
            out
        }
        Generator::F => {
            let mut out = TensorVector::zero(f, v.m1, v.m2, n + 1);
            for (r, e) in v.entries.iter().enumerate() {
                let r = r as i64;
                if first && r < m1 {
                    out.entries[(r + 1) as usize] = &out.entries[(r + 1) as usize] + e;
                } else if !first && n - r < m2 {
                    out.entries[r as usize] = &out.entries[r as usize] + e;
                }
            }
            out
        }
    }
}

/// `Omega = e (x) f + f (x) e + (1/2) h (x) h` with `1/2 = (p+1)/2`.
pub fn casimir_apply(v: &TensorVector) -> TensorVector {
    use Generator::*;
    use Slot::*;
    let ef = sl2_tensor_action(E, First, &sl2_tensor_action(F, Second, v));
    let fe = sl2_tensor_action(F, First, &sl2_tensor_action(E, Second, v));
    let hh = sl2_tensor_action(H, First, &sl2_tensor_action(H, Second, v));
    let half = v.field.elem(v.field.p().div_ceil(2));
    ef.try_add(&fe).and_then(|s| s.try_add(&hh.scale(&half))).expect("same space")
}

/// Matrix of `Omega` on the weight space with drop `n`; column `r` is the image of basis vector `r`.
pub fn casimir_matrix(field: &PrimeField, m1: u64, m2: u64, n: u64) -> Vec<Vec<FpElement>> {
    let dim = n as usize + 1;
    let mut mat = vec![vec![field.zero(); dim]; dim];
    for col in 0..dim {
        let Ok(basis) = TensorVector::basis(field, m1, m2, n as i64, col) else { continue };
        let image = casimir_apply(&basis);
        for (row, e) in image.entries.iter().enumerate() {
            mat[row][col] = e.coefficient_fp(&[0, 0]).expect("two variables");
        }
    }
    mat
}

/// `(z1 - z2)^e` in `F_p[z1, z2]`.
fn z_diff_pow(field: &PrimeField, e: u64) -> FpPoly {
    (&FpPoly::var(field, 2, 0) - &FpPoly::var(field, 2, 1)).pow(e)
}

/// The F_p-hypergeometric solution: `u_r = (z1-z2)^{M12} int W_r Psi_p dt`.
pub fn kz_solution(k: &KZParams) -> Result<TensorVector> {
    let f = &k.field;
    let n = k.n as usize;
    let nv = n + 2;
    let (z1, z2) = (FpPoly::var(f, nv, n), FpPoly::var(f, nv, n + 1));
    let t_map: Vec<usize> = (0..n).collect();
    let mut common = vandermonde_power(f, n, 2 * k.c).embed(nv, &t_map)?;
    let mut minus_z1 = Vec::with_capacity(n);
    let mut minus_z2 = Vec::with_capacity(n);
    for i in 0..n {
        let t = FpPoly::var(f, nv, i);
        let d1 = &t - &z1;
        let d2 = &t - &z2;
        common = &(&common * &d1.pow(k.big_m1 - 1)) * &d2.pow(k.big_m2 - 1);
        minus_z1.push(d1);
        minus_z2.push(d2);
    }
    // weights[r] = sum over |J| = r of prod_{J} (t_j - z2) prod_{not J} (t_j - z1)
    let mut weights = vec![FpPoly::one(f, nv)];
    for j in 0..n {
        let mut next = vec![FpPoly::zero(f, nv); weights.len() + 1];
        for (r, w) in weights.iter().enumerate() {
            next[r] = &next[r] + &(w * &minus_z1[j]);
            next[r + 1] = &next[r + 1] + &(w * &minus_z2[j]);
        }
        weights = next;
    }
    let prefactor = z_diff_pow(f, k.big_m12);
    let cycle = Cycle::ones(n);
    let entries: Vec<FpPoly> = weights
        .par_iter()
        .map(|w| {
            let integral = fp_integral_partial(&(&common * w), &t_map, &cycle)?;
            Ok(&prefactor * &integral)
        })
        .collect::<Result<_>>()?;
    Ok(TensorVector { field: f.clone(), m1: k.m1, m2: k.m2, n: k.n as i64, entries })
}

/// The product formula for the solution, valid under [`KZParams::theorem71_regime`].
pub fn kz_closed_form(k: &KZParams) -> Result<TensorVector> {
    if !k.theorem71_regime() {
        return Err(domain!("{k:?} violates the closed-form hypotheses"));
    }
    let f = &k.field;
    let p = f.p() as i64;
    let (n, c, m1, m2) = (k.n as i64, k.c as i64, k.big_m1 as i64, k.big_m2 as i64);
    let scalar = (1..=n)
        .fold(ProjectedQuotient::new(f), |q, j| {
            q.mul_factorial(j * c)
                .div_factorial(c)
                .mul_factorial(m1 + (j - 1) * c)
                .mul_factorial(m2 + (j - 1) * c)
                .div_factorial(m1 + m2 + (n + j - 2) * c - p)
        })
        .mul_sign((n * (m1 + (n - 1) * c + 1)) as u64)
        .finish()?;
    let b = k.big_m12 as i64 + n * (m1 + m2 + (n - 1) * c - p);
    let shape = z_diff_pow(f, b as u64).scale(&scalar.value());
    let pochhammer = |m: i64, len: i64| -> Result<FpElement> {
        let mut acc = f.one();
        for j in 1..=len {
            let v = f.elem_i64(m + (j - 1) * c);
            if v.is_zero() {
                return Err(singular!("factor {} vanishes mod {p}", m + (j - 1) * c));
            }
            acc = acc * v;
        }
        Ok(acc)
    };
    let mut entries = Vec::with_capacity(k.n as usize + 1);
    for r in 0..=n {
        let denom = pochhammer(m1, r)? * pochhammer(m2, n - r)?;
        let coeff = f.sign(r as u64) * f.binom_lucas(n as u64, r as u64) * denom.inv()?;
        entries.push(shape.scale(&coeff.value()));
    }
    Ok(TensorVector { field: f.clone(), m1: k.m1, m2: k.m2, n, entries })
}

/// `(kappa (z1-z2) du/dz1 - Omega u, kappa (z2-z1) du/dz2 - Omega u)`.
pub fn kz_residual(u: &TensorVector, k: &KZParams) -> Result<(TensorVector, TensorVector)> {
    let f = &u.field;
    let kappa = k.kappa().value();
    let omega_u = casimir_apply(u);
    let d12 = z_diff_pow(f, 1);
    let d21 = -&d12;
    let first = u.map_entries(|e| Ok(&d12 * &e.partial_derivative(0)?.scale(&kappa)))?.try_sub(&omega_u)?;
    let second = u.map_entries(|e| Ok(&d21 * &e.partial_derivative(1)?.scale(&kappa)))?.try_sub(&omega_u)?;
    Ok((first, second))
}

/// `(n-r)(m2-n+r+1) u_r + (r+1)(m1-r) u_{r+1} = 0` for `r = 0..n-1`, i.e. `e u = 0`.
pub fn singular_check(u: &TensorVector) -> bool {
    sl2_tensor_action(Generator::E, Slot::Both, u).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn const_vec(f: &PrimeField, m1: u64, m2: u64, vals: &[u64]) -> TensorVector {
        let mut v = TensorVector::zero(f, m1, m2, vals.len() as i64 - 1);
        for (r, &x) in vals.iter().enumerate() {
            v.entries[r] = FpPoly::constant(f, 2, f.reduce_u64(x));
        }
        v
    }

    #[test]
    fn derived_parameters() {
        let k = KZParams::new(&field(7), 2, 2, 1, 3, 1).unwrap();
        assert_eq!((k.big_m1, k.big_m2, k.big_m12, k.c), (4, 4, 3, 5));
        assert!(k.theorem71_regime());
        let k = KZParams::new(&field(11), 3, 3, 2, 2, 1).unwrap();
        assert_eq!((k.big_m1, k.big_m2, k.big_m12, k.c), (4, 4, 5, 6));
        assert!(k.theorem71_regime());
        let k = KZParams::new(&field(11), 3, 3, 2, -4, -2).unwrap();
        assert_eq!((k.kappa_num, k.kappa_den), (2, 1));
        assert!(KZParams::new(&field(7), 2, 2, 3, 3, 1).is_err());
        assert!(KZParams::new(&field(7), 2, 2, 1, 7, 1).is_err());
    }

    #[test]
    fn sl2_actions() {
        let f = field(13);
        let top = TensorVector::basis(&f, 3, 4, 0, 0).unwrap();
        for slot in [Slot::First, Slot::Second, Slot::Both] {
            let e = sl2_tensor_action(Generator::E, slot, &top);
            assert_eq!(e.n, -1);
            assert!(e.is_zero());
        }
        let v = TensorVector::basis(&f, 3, 4, 3, 1).unwrap();
        let h = sl2_tensor_action(Generator::H, Slot::First, &sl2_tensor_action(Generator::H, Slot::Second, &v));
        // weights 3 - 2 = 1 and 4 - 2*2 = 0
        assert!(h.entries[1].coefficient_fp(&[0, 0]).unwrap().is_zero());
        // e f v_m = m v_m
        let fv = sl2_tensor_action(Generator::F, Slot::First, &top);
        let efv = sl2_tensor_action(Generator::E, Slot::First, &fv);
        assert_eq!(efv.entries[0].coefficient_fp(&[0, 0]).unwrap().value(), 3);
        // [e, f] = h on every basis vector of V_3 (x) V_4
        for n in 0..=7i64 {
            for r in 0..=n as usize {
                let Ok(b) = TensorVector::basis(&f, 3, 4, n, r) else { continue };
                for slot in [Slot::First, Slot::Second] {
                    let ef = sl2_tensor_action(Generator::E, slot, &sl2_tensor_action(Generator::F, slot, &b));
                    let fe = sl2_tensor_action(Generator::F, slot, &sl2_tensor_action(Generator::E, slot, &b));
                    let h = sl2_tensor_action(Generator::H, slot, &b);
                    assert_eq!(ef.try_sub(&fe).unwrap(), h, "n={n} r={r} {slot:?}");
                }
            }
        }
    }

    #[test]
    fn casimir_properties() {
        let f = field(11);
        let top = TensorVector::basis(&f, 3, 5, 0, 0).unwrap();
        let w = casimir_apply(&top);
        assert_eq!(w, top.scale(&(f.elem(15) * f.elem(2).inv().unwrap())));

        let v = const_vec(&f, 3, 5, &[1, 7, 4, 9]);
        let h = |x: &TensorVector| sl2_tensor_action(Generator::H, Slot::Both, x);
        assert_eq!(casimir_apply(&h(&v)), h(&casimir_apply(&v)));
        for g in [Generator::E, Generator::F] {
            let a = casimir_apply(&sl2_tensor_action(g, Slot::Both, &v));
            let b = sl2_tensor_action(g, Slot::Both, &casimir_apply(&v));
            assert_eq!(a, b, "{g:?}");
        }
        let mat = casimir_matrix(&f, 3, 5, 3);
        let image = casimir_apply(&v);
        for (row, e) in image.entries.iter().enumerate() {
            let want = (0..4).fold(f.zero(), |acc, col| {
                acc + &mat[row][col] * &v.entries[col].coefficient_fp(&[0, 0]).unwrap()
            });
            assert_eq!(e.coefficient_fp(&[0, 0]).unwrap(), want);
        }
    }

    #[test]
    fn first_instance() {
        let k = KZParams::new(&field(7), 2, 2, 1, 3, 1).unwrap();
        let u = kz_solution(&k).unwrap();
        assert!(!u.is_zero());
        assert_eq!(u, kz_closed_form(&k).unwrap());
        let (r1, r2) = kz_residual(&u, &k).unwrap();
        assert!(r1.is_zero() && r2.is_zero());
        assert!(singular_check(&u));
    }

    #[test]
    fn second_instance() {
        let k = KZParams::new(&field(11), 3, 3, 2, 2, 1).unwrap();
        let u = kz_solution(&k).unwrap();
        assert_eq!(u, kz_closed_form(&k).unwrap());
        let (r1, r2) = kz_residual(&u, &k).unwrap();
        assert!(r1.is_zero() && r2.is_zero());
        assert!(singular_check(&u));
    }

    #[test]
    fn non_solution_has_residual() {
        let k = KZParams::new(&field(7), 2, 2, 1, 3, 1).unwrap();
        let f = &k.field;
        let mut v = TensorVector::zero(f, 2, 2, 1);
        v.entries[0] = FpPoly::var(f, 2, 0);
        v.entries[1] = FpPoly::var(f, 2, 1).pow(2);
        let (r1, r2) = kz_residual(&v, &k).unwrap();
        assert!(!r1.is_zero() || !r2.is_zero());
        assert!(!singular_check(&v));
    }

    #[test]
    fn empty_weight_drop() {
        let k = KZParams::new(&field(7), 2, 3, 0, 3, 1).unwrap();
        let u = kz_solution(&k).unwrap();
        assert_eq!(u.entries, vec![z_diff_pow(&k.field, k.big_m12)]);
        assert!(singular_check(&u));
        assert!(kz_closed_form(&k).is_err());
    }
}
