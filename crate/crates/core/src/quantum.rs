//! Two-qubit Pauli operators in exact Gaussian-integer arithmetic, for
//! cross-checking the square's operator algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::Serialize;

use crate::model::Sign;
use crate::sequences::ContextId;
use crate::verifier::{Counterexample, VerificationReport};

/// `re + im·i` with integer parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub fn conj(self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) => write!(f, "{re}{im:+}i"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[GaussianInt; 2]; 2] {
        const O: GaussianInt = GaussianInt::ZERO;
        const L: GaussianInt = GaussianInt::ONE;
        const N: GaussianInt = GaussianInt::new(-1, 0);
        const I: GaussianInt = GaussianInt::I;
        const J: GaussianInt = GaussianInt::new(0, -1);
        match self {
            Pauli::I => [[L, O], [O, L]],
            Pauli::X => [[O, L], [L, O]],
            Pauli::Y => [[O, J], [I, O]],
            Pauli::Z => [[L, O], [O, N]],
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Matrix4(pub [[GaussianInt; 4]; 4]);

impl Matrix4 {
    pub fn identity() -> Self {
        let mut m = [[GaussianInt::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = GaussianInt::ONE;
        }
        Matrix4(m)
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[GaussianInt::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[j][i].conj();
            }
        }
        Matrix4(m)
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// `Some(+1)` for the identity, `Some(-1)` for minus the identity.
    pub fn identity_sign(&self) -> Option<Sign> {
        let id = Matrix4::identity();
        if *self == id {
            Some(Sign::Plus)
        } else if *self == -id {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        let mut m = [[GaussianInt::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).fold(GaussianInt::ZERO, |acc, k| acc + self.0[i][k] * rhs.0[k][j]);
            }
        }
        Matrix4(m)
    }
}

impl Neg for Matrix4 {
    type Output = Matrix4;
    fn neg(self) -> Matrix4 {
        Matrix4(self.0.map(|row| row.map(Neg::neg)))
    }
}

/// Kronecker product `a ⊗ b`; qubit 1 is the high index bit.
pub fn pauli_tensor(a: Pauli, b: Pauli) -> Matrix4 {
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut m = [[GaussianInt::ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = ma[i >> 1][j >> 1] * mb[i & 1][j & 1];
        }
    }
    Matrix4(m)
}

pub fn commutes(m: &Matrix4, n: &Matrix4) -> bool {
    *m * *n == *n * *m
}

/// One cell of the quantum square: `first ⊗ second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareCell {
    pub first: Pauli,
    pub second: Pauli,
}

impl SquareCell {
    pub fn matrix(self) -> Matrix4 {
        pauli_tensor(self.first, self.second)
    }
}

impl fmt::Display for SquareCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.first.letter(), self.second.letter())
    }
}

/// Operators laid out cell for cell like the classical contexts:
///
/// ```text
///   X⊗I   I⊗X   X⊗X
///   I⊗Y   Y⊗I   Y⊗Y
///   X⊗Y   Y⊗X   Z⊗Z
/// ```
pub fn quantum_square() -> [[SquareCell; 3]; 3] {
    use Pauli::*;
    let c = |first, second| SquareCell { first, second };
    [
        [c(X, I), c(I, X), c(X, X)],
        [c(I, Y), c(Y, I), c(Y, Y)],
        [c(X, Y), c(Y, X), c(Z, Z)],
    ]
}

/// Cells belonging to a context, in the order of
/// [`ContextId::observables`].
pub fn context_cells(context: ContextId) -> [SquareCell; 3] {
    let sq = quantum_square();
    match context {
        ContextId::R1 => sq[0],
        ContextId::R2 => [sq[1][1], sq[1][0], sq[1][2]],
        ContextId::R3 => sq[2],
        ContextId::C1 => [sq[0][0], sq[1][0], sq[2][0]],
        ContextId::C2 => [sq[1][1], sq[0][1], sq[2][1]],
        ContextId::C3 => [sq[0][2], sq[1][2], sq[2][2]],
    }
}

/// Product of the three operators of a context, as a sign when it is `±1`.
pub fn context_operator_product(context: ContextId) -> Option<Sign> {
    let [a, b, c] = context_cells(context).map(SquareCell::matrix);
    (a * b * c).identity_sign()
}

/// `±1` per context in `R1, R2, R3, C1, C2, C3` order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantumSignature {
    pub products: Vec<(ContextId, Option<Sign>)>,
}

pub fn quantum_signature() -> QuantumSignature {
    QuantumSignature {
        products: ContextId::ALL
            .into_iter()
            .map(|c| (c, context_operator_product(c)))
            .collect(),
    }
}

/// Checks the nine operators are Hermitian involutions, operators sharing a
/// row or column commute, and the triple products are `+1` except `-1` on C3.
pub fn verify_quantum_square() -> VerificationReport {
    let mut counterexamples = Vec::new();
    let mut fail = |detail: String| {
        counterexamples.push(Counterexample {
            initial: "quantum".into(),
            sequence: vec![],
            observable: None,
            values: vec![],
            detail,
        })
    };
    let mut cases = 0u64;
    for cell in quantum_square().iter().flatten() {
        cases += 1;
        let m = cell.matrix();
        if !(m.is_hermitian() && m * m == Matrix4::identity()) {
            fail(format!("{cell} is not a Hermitian involution"));
        }
    }
    for context in ContextId::ALL {
        let cells = context_cells(context);
        for i in 0..3 {
            for j in i + 1..3 {
                cases += 1;
                if !commutes(&cells[i].matrix(), &cells[j].matrix()) {
                    fail(format!(
                        "{} and {} do not commute in {context}",
                        cells[i], cells[j]
                    ));
                }
            }
        }
        cases += 1;
        let product = context_operator_product(context);
        if product != Some(context.required_product()) {
            fail(format!(
                "{context} product is {:?}, expected {}1",
                product,
                context.required_product()
            ));
        }
    }
    VerificationReport::new(
        "quantum square",
        "9 involutions + 18 commutators + 6 products",
        cases,
        counterexamples,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use Pauli::*;

    #[test]
    fn identity_tensor() {
        assert_eq!(pauli_tensor(I, I), Matrix4::identity());
    }

    #[test]
    fn xx_is_involution() {
        let xx = pauli_tensor(X, X);
        assert_eq!(xx * xx, Matrix4::identity());
    }

    #[test]
    fn yy_is_real() {
        // Y ⊗ Y = antidiagonal (-1, 1, 1, -1)
        let yy = pauli_tensor(Y, Y);
        assert!(yy.0.iter().flatten().all(|z| z.im == 0));
        let anti: Vec<i64> = (0..4).map(|i| yy.0[i][3 - i].re).collect();
        assert_eq!(anti, vec![-1, 1, 1, -1]);
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&pauli_tensor(X, I), &pauli_tensor(I, X)));
        assert!(!commutes(&pauli_tensor(X, I), &pauli_tensor(Y, I)));
        assert!(commutes(&pauli_tensor(X, X), &pauli_tensor(Y, Y)));
    }

    #[test]
    fn row_and_column_products() {
        assert_eq!(context_operator_product(ContextId::R1), Some(Sign::Plus));
        assert_eq!(context_operator_product(ContextId::C3), Some(Sign::Minus));
        assert_eq!(context_operator_product(ContextId::R3), Some(Sign::Plus));
    }

    #[test]
    fn full_report_passes() {
        let r = verify_quantum_square();
        assert!(r.pass, "{:?}", r.counterexamples);
        assert_eq!(r.universe_size, 9 + 18 + 6);
    }

    #[test]
    fn gaussian_arithmetic() {
        assert_eq!(GaussianInt::I * GaussianInt::I, GaussianInt::new(-1, 0));
        assert_eq!(GaussianInt::new(1, 2).to_string(), "1+2i");
        assert_eq!(GaussianInt::new(0, -1).to_string(), "-1i");
    }
}
