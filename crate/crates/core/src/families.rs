//! Closed-form constructors for the order-6 families.
//!
//! The nonaffine family `H(x1, x2)` is built two ways: from the summary form in
//! terms of the four f-factors ([`family_h`]), and step by step from the Z block
//! and the element-wise solution of `a + b = -Z` ([`z_block`], [`solve_ab`],
//! [`assemble_h`]). Tests hold the two routes against each other.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{Block2, EquivalenceWitness, UnitMatrix};

/// Squared-modulus guard below which the Z block is treated as singular.
pub const SINGULAR_GUARD: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Primitive sixth root of unity `(1 + i sqrt 3) / 2`.
pub fn sixth_root() -> Complex64 {
    phase(PI / 3.0)
}

/// Parameters `(x1, x2)` of `H`, with `z1 = exp(i x1)`, `z2 = exp(i x2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub x1: f64,
    pub x2: f64,
}

impl ParamPoint {
    pub const fn new(x1: f64, x2: f64) -> Self {
        ParamPoint { x1, x2 }
    }

    pub fn z1(&self) -> Complex64 {
        phase(self.x1)
    }

    pub fn z2(&self) -> Complex64 {
        phase(self.x2)
    }

    /// Whether `-pi/2 < x1 <= pi/2` and `-pi/2 < x2 <= pi/2`.
    pub fn in_canonical_domain(&self) -> bool {
        let ok = |x: f64| x > -FRAC_PI_2 && x <= FRAC_PI_2;
        ok(self.x1) && ok(self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Sign factors of the element-wise solution for `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignPattern {
    pub s11: Sign,
    pub s12: Sign,
    pub s21: Sign,
    pub s22: Sign,
}

impl SignPattern {
    /// `s11 = s12 = +1`, `s21 = s22 = -1`: the choice that makes `a` and `b`
    /// themselves Hadamard.
    pub const REPRESENTATIVE: SignPattern =
        SignPattern { s11: Sign::Plus, s12: Sign::Plus, s21: Sign::Minus, s22: Sign::Minus };

    pub const fn new(s11: Sign, s12: Sign, s21: Sign, s22: Sign) -> Self {
        SignPattern { s11, s12, s21, s22 }
    }

    pub fn get(&self, i: usize, j: usize) -> Sign {
        match (i, j) {
            (0, 0) => self.s11,
            (0, 1) => self.s12,
            (1, 0) => self.s21,
            _ => self.s22,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.s11.value() * self.s21.value() == self.s12.value() * self.s22.value()
    }

    /// All 16 patterns, in a fixed order.
    pub fn all() -> impl Iterator<Item = SignPattern> {
        (0u8..16).map(|bits| {
            let s = |k: u8| if bits & (8 >> k) == 0 { Sign::Plus } else { Sign::Minus };
            SignPattern::new(s(0), s(1), s(2), s(3))
        })
    }

    /// The eight patterns satisfying `s11 * s21 == s12 * s22`.
    pub fn admissible() -> impl Iterator<Item = SignPattern> {
        Self::all().filter(SignPattern::is_admissible)
    }
}

/// The 2x2 block `Z` with `a + b = -Z`, together with the phases it is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZBlock {
    pub z: Block2,
    pub z1: Complex64,
    pub z2: Complex64,
}

/// The two 2x2 blocks populating rows and columns 3..6 of `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ABPair {
    pub a: Block2,
    pub b: Block2,
}

/// `F6^(2)(a, b)`, the affine Fourier family, in dephased form.
pub fn fourier_f6(a: f64, b: f64) -> UnitMatrix {
    let (z1, z2) = (phase(a), phase(b));
    let f = sixth_root();
    let fb = f.conj();
    #[rustfmt::skip]
    let rows = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, z1 * f, -z2 * fb, -ONE, -z1 * f, z2 * fb],
        [ONE, -fb, -f, ONE, -fb, -f],
        [ONE, -z1, z2, -ONE, z1, -z2],
        [ONE, -f, -fb, ONE, -f, -fb],
        [ONE, z1 * fb, -z2 * f, -ONE, -z1 * fb, z2 * f],
    ];
    UnitMatrix::from_rows(&rows).expect("6x6")
}

/// The transposed Fourier family `(F6^(2)(a, b))^T`.
pub fn fourier_f6_transposed(a: f64, b: f64) -> UnitMatrix {
    fourier_f6(a, b).transpose()
}

/// The one-parameter Dita family `D6^(1)(c)`, defined for `-pi/4 <= c <= pi/4`.
pub fn dita_d6(c: f64) -> Result<UnitMatrix> {
    if !(-FRAC_PI_4..=FRAC_PI_4).contains(&c) {
        return Err(Error::ParamOutOfRange { name: "c", value: c });
    }
    let z = phase(c);
    let zb = z.conj();
    #[rustfmt::skip]
    let rows = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, -ONE, I, -I, -I, I],
        [ONE, I, -ONE, I * z, -I * z, -I],
        [ONE, -I, I * zb, -ONE, I, -I * zb],
        [ONE, -I, -I * zb, I, -ONE, I * zb],
        [ONE, I, -I, -I * z, I * z, -ONE],
    ];
    UnitMatrix::from_rows(&rows)
}

/// The Z block fixed by the linear unitarity constraints.
pub fn z_block(p: ParamPoint) -> ZBlock {
    let (z1, z2) = (p.z1(), p.z2());
    let (w1, w2) = (z1.conj(), z2.conj());
    let half = |u: Complex64, v: Complex64| ONE - (ONE - u) * (ONE - v) * 0.5;
    let z = Block2([
        [half(z1, z2), z2 * half(z1, w2)],
        [z1 * half(w1, z2), -z1 * z2 * half(w1, w2)],
    ]);
    ZBlock { z, z1, z2 }
}

/// Element-wise solution of `a + b = -Z` with unimodular entries:
/// `a_ij = -Z_ij (1/2 + s_ij i r_ij)`, `b_ij = -Z_ij (1/2 - s_ij i r_ij)`,
/// `r_ij = sqrt(1/|Z_ij|^2 - 1/4)`.
pub fn solve_ab(p: ParamPoint, s: SignPattern) -> Result<ABPair> {
    if !s.is_admissible() {
        return Err(Error::InadmissibleSigns);
    }
    let zb = z_block(p);
    let mut a = [[ONE; 2]; 2];
    let mut b = [[ONE; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let zij = zb.z.get(i, j);
            let m2 = zij.norm_sqr();
            if m2 < SINGULAR_GUARD {
                return Err(Error::SingularZ { x1: p.x1, x2: p.x2 });
            }
            // 1/|Z|^2 - 1/4 >= 1/4 since |Z|^2 <= 2
            let r = (1.0 / m2 - 0.25).sqrt() * s.get(i, j).value();
            a[i][j] = -zij * Complex64::new(0.5, r);
            b[i][j] = -zij * Complex64::new(0.5, -r);
        }
    }
    Ok(ABPair { a: Block2(a), b: Block2(b) })
}

/// Lays out the simplified ansatz: rows 3..6 carry `(z2, a, b)`, `(-z2, ..)`,
/// `(z2, b, a)`, `(-z2, ..)`.
pub fn assemble_h(z1: Complex64, z2: Complex64, ab: &ABPair) -> UnitMatrix {
    let (a, b) = (ab.a.0, ab.b.0);
    #[rustfmt::skip]
    let rows = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, -ONE, z1, -z1, z1, -z1],
        [ONE, z2, a[0][0], a[0][1], b[0][0], b[0][1]],
        [ONE, -z2, a[1][0], a[1][1], b[1][0], b[1][1]],
        [ONE, z2, b[0][0], b[0][1], a[0][0], a[0][1]],
        [ONE, -z2, b[1][0], b[1][1], a[1][0], a[1][1]],
    ];
    UnitMatrix::from_rows(&rows).expect("6x6")
}

/// `H(x1, x2)` assembled from `solve_ab` with an arbitrary admissible sign pattern.
pub fn family_h_with_signs(p: ParamPoint, s: SignPattern) -> Result<UnitMatrix> {
    let ab = solve_ab(p, s)?;
    Ok(assemble_h(p.z1(), p.z2(), &ab))
}

/// `f(x1, x2) = (1 - (1 - z1)(1 - z2)/2) (1/2 + i sqrt(1/(1 + sin x1 sin x2) - 1/4))`.
pub fn f_factor(x1: f64, x2: f64) -> Result<Complex64> {
    let d = 1.0 + x1.sin() * x2.sin();
    if d <= SINGULAR_GUARD {
        return Err(Error::SingularZ { x1, x2 });
    }
    let (z1, z2) = (phase(x1), phase(x2));
    let prefactor = ONE - (ONE - z1) * (ONE - z2) * 0.5;
    Ok(prefactor * Complex64::new(0.5, (1.0 / d - 0.25).sqrt()))
}

/// The four factors `f1 = f(x1, x2)`, `f2 = f(x1, -x2)`, `f3 = f(-x1, -x2)`,
/// `f4 = f(-x1, x2)`.
pub fn f_factors(p: ParamPoint) -> Result<[Complex64; 4]> {
    let (x1, x2) = (p.x1, p.x2);
    let guard = |r: Result<Complex64>| r.map_err(|_| Error::SingularZ { x1, x2 });
    Ok([
        guard(f_factor(x1, x2))?,
        guard(f_factor(x1, -x2))?,
        guard(f_factor(-x1, -x2))?,
        guard(f_factor(-x1, x2))?,
    ])
}

/// The nonaffine two-parameter family `H(x1, x2)` in its summary form.
///
/// Defined for every real `(x1, x2)` with `|sin x1 sin x2| < 1`; the canonical
/// domain `(-pi/2, pi/2]^2` is reached with [`reduce_params`]. Degenerates at the
/// corners `x1, x2 = +-pi/2`, where the limit depends on the approach direction
/// (see [`dita_corner`]).
pub fn family_h(p: ParamPoint) -> Result<UnitMatrix> {
    let [f1, f2, f3, f4] = f_factors(p)?;
    let (z1, z2) = (p.z1(), p.z2());
    let z12 = z1 * z2;
    #[rustfmt::skip]
    let rows = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, -ONE, z1, -z1, z1, -z1],
        [ONE, z2, -f1, -z2 * f2, -f3.conj(), -z2 * f4.conj()],
        [ONE, -z2, -z1 * f2.conj(), z12 * f1.conj(), -z1 * f4, z12 * f3],
        [ONE, z2, -f3.conj(), -z2 * f4.conj(), -f1, -z2 * f2],
        [ONE, -z2, -z1 * f4, z12 * f3, -z1 * f2.conj(), z12 * f1.conj()],
    ];
    UnitMatrix::from_rows(&rows)
}

/// Reduces arbitrary angles to the canonical domain `(-pi/2, pi/2]^2`.
///
/// Uses `H(x1 + pi, x2) = H(x1, x2) P34 P56` and
/// `H(x1, x2 + pi) = P36 P45 H(x1, x2)`; the returned witness `w` satisfies
/// `apply_equivalence(family_h(p), w) == family_h(x1, x2)`.
pub fn reduce_params(x1: f64, x2: f64) -> (ParamPoint, EquivalenceWitness) {
    let (r1, k1) = reduce_angle(x1);
    let (r2, k2) = reduce_angle(x2);
    let mut rows: Vec<(usize, usize)> = Vec::new();
    let mut cols: Vec<(usize, usize)> = Vec::new();
    if k1.rem_euclid(2) == 1 {
        cols.extend([(2, 3), (4, 5)]);
    }
    if k2.rem_euclid(2) == 1 {
        rows.extend([(2, 5), (3, 4)]);
    }
    (ParamPoint::new(r1, r2), EquivalenceWitness::swaps(6, &rows, &cols))
}

/// `x = r + k pi` with `-pi/2 < r <= pi/2`.
fn reduce_angle(x: f64) -> (f64, i64) {
    let mut k = ((x - FRAC_PI_2) / PI).ceil() as i64;
    let mut r = x - k as f64 * PI;
    if r <= -FRAC_PI_2 {
        r += PI;
        k -= 1;
    } else if r > FRAC_PI_2 {
        r -= PI;
        k += 1;
    }
    (r, k)
}

/// The factors `g1`, `g2`, `g3` of the diagonal slices:
/// `g1 = (1 - i sin x) q`, `g3 = (1 + i sin x) q` with
/// `q = 1/2 + i sqrt(1/(1 + sin^2 x) - 1/4)`, and
/// `g2 = cos x (1/2 + i sqrt(1/cos^2 x - 1/4))`.
pub fn g_factors(x: f64) -> Result<[Complex64; 3]> {
    let (s, c) = (x.sin(), x.cos());
    if c * c < SINGULAR_GUARD {
        return Err(Error::SingularZ { x1: x, x2: x });
    }
    let q = Complex64::new(0.5, (1.0 / (1.0 + s * s) - 0.25).sqrt());
    let g1 = Complex64::new(1.0, -s) * q;
    let g2 = Complex64::new(0.5, (1.0 / (c * c) - 0.25).sqrt()) * c;
    let g3 = Complex64::new(1.0, s) * q;
    Ok([g1, g2, g3])
}

/// The symmetric slice `P46 H(x, x)`, written out in terms of the g-factors.
pub fn symmetric_m(x: f64) -> Result<UnitMatrix> {
    let [g1, g2, g3] = g_factors(x)?;
    let z = phase(x);
    let (g1b, g2b, g3b) = (g1.conj(), g2.conj(), g3.conj());
    #[rustfmt::skip]
    let rows = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, -ONE, z, -z, z, -z],
        [ONE, z, -z * g1, -z * g2, -z * g3b, -z * g2b],
        [ONE, -z, -z * g2, z * g3, -z * g2b, z * g1b],
        [ONE, z, -z * g3b, -z * g2b, -z * g1, -z * g2],
        [ONE, -z, -z * g2b, z * g1b, -z * g2, z * g3],
    ];
    UnitMatrix::from_rows(&rows)
}

/// The essentially self-adjoint slice `H(x, -x)`.
pub fn self_adjoint_h(x: f64) -> Result<UnitMatrix> {
    family_h(ParamPoint::new(x, -x))
}

/// Limit of `H` at the corner `x1, x2 -> pi/2`, reached along a direction whose
/// angle is `x = lim arctan((e1 - e2)/(e1 + e2))`; defined for `-pi/4 < x < pi/4`.
pub fn dita_corner(x: f64) -> Result<UnitMatrix> {
    if !(x > -FRAC_PI_4 && x < FRAC_PI_4) {
        return Err(Error::ParamOutOfRange { name: "x", value: x });
    }
    let z = phase(x);
    let zb = z.conj();
    #[rustfmt::skip]
    let rows = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, -ONE, I, -I, I, -I],
        [ONE, I, -I, z, -ONE, -z],
        [ONE, -I, -zb, I, zb, -ONE],
        [ONE, I, -ONE, -z, -I, z],
        [ONE, -I, zb, -ONE, -zb, I],
    ];
    UnitMatrix::from_rows(&rows)
}

/// Which edge of the parameter square a border slice runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderAxis {
    /// `H(x, pi/2)`.
    X2HalfPi,
    /// `H(pi/2, x)`.
    X1HalfPi,
}

pub fn border_h(which: BorderAxis, x: f64) -> Result<UnitMatrix> {
    match which {
        BorderAxis::X2HalfPi => family_h(ParamPoint::new(x, FRAC_PI_2)),
        BorderAxis::X1HalfPi => family_h(ParamPoint::new(FRAC_PI_2, x)),
    }
}

/// Point `xi` of the interpolating path `H(xi x, (1 - xi) x)` between the
/// Fourier slice (`xi = 1`) and the transposed Fourier slice (`xi = 0`).
pub fn interpolation(x: f64, xi: f64) -> Result<UnitMatrix> {
    family_h(ParamPoint::new(xi * x, (1.0 - xi) * x))
}
