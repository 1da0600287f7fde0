use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::element::Element;
use super::{AlgebraError, Singularity};
use crate::linalg::Mat3;
use crate::report::ResidualReport;
use crate::scalar::{Rational, RationalText, Scalar};

/// Structure constants `c[i][j][k]`: `eᵢ·eⱼ = Σₖ c[i][j][k] eₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable<T> {
    c: [[[T; 3]; 3]; 3],
}

impl<T: Scalar> StructureTable<T> {
    /// Table of the A³₁ pattern from all nine constants `p1..p9`, with no
    /// associativity constraint imposed.
    pub fn from_constants(p: [T; 9]) -> Self {
        let [p1, p2, p3, p4, p5, p6, p7, p8, p9] = p;
        let z = || T::zero();
        let o = || T::one();
        let e1 = [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]];
        let e2 = [
            [z(), o(), z()],
            [p7.clone(), p1, p2],
            [p8.clone(), p3.clone(), p4.clone()],
        ];
        let e3 = [[z(), z(), o()], [p8, p3, p4], [p9, p5, p6]];
        StructureTable { c: [e1, e2, e3] }
    }

    pub fn constants(&self) -> &[[[T; 3]; 3]; 3] {
        &self.c
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Element<T> {
        Element(self.c[i][j].clone())
    }

    pub fn multiply(&self, a: &Element<T>, b: &Element<T>) -> Element<T> {
        let mut out = Element::<T>::zero();
        for i in 0..3 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if b[j].is_zero() {
                    continue;
                }
                let s = a[i].clone() * b[j].clone();
                for k in 0..3 {
                    out[k] = out[k].clone() + s.clone() * self.c[i][j][k].clone();
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `eᵢ`: column `j` holds the coordinates of `eᵢ·eⱼ`.
    pub fn basis_matrix(&self, i: usize) -> Mat3<T> {
        Mat3::from_fn(|row, col| self.c[i][col][row].clone())
    }

    /// `R(u) = u¹R₁ + u²R₂ + u³R₃`.
    pub fn matrix_of(&self, u: &Element<T>) -> Mat3<T> {
        Mat3::from_fn(|row, col| {
            (0..3).fold(T::zero(), |acc, i| {
                acc + u[i].clone() * self.c[i][col][row].clone()
            })
        })
    }

    /// Largest `|((eᵢeⱼ)eₖ − eᵢ(eⱼeₖ))ₗ|` over all 27 basis triples.
    pub fn associator_max(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = |n| Element::<T>::basis(n);
                    let left = self.multiply(&self.multiply(&e(i), &e(j)), &e(k));
                    let right = self.multiply(&e(i), &self.multiply(&e(j), &e(k)));
                    let d = (left - right).max_abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        worst
    }

    pub fn associativity_report(&self) -> ResidualReport {
        let worst = self.associator_max();
        ResidualReport::new("associativity (27 basis triples)", T::EXACT, worst.to_f64())
            .with_pass(worst.is_negligible())
    }

    pub fn is_commutative(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.c[i][j] == self.c[j][i]))
    }

    /// `R(u)⁻¹ e₁`, the inverse of `u` when `R(u)` is invertible.
    pub fn invert(&self, u: &Element<T>) -> Result<Element<T>, AlgebraError> {
        let r = self.matrix_of(u);
        if r.det().is_negligible() {
            return Err(AlgebraError::SingularElement(Singularity::ZeroDeterminant));
        }
        let e = Element::<T>::identity();
        r.solve(&e.0)
            .map(Element)
            .ok_or(AlgebraError::SingularElement(Singularity::ZeroDeterminant))
    }
}

/// One member of the family A³₁: six free parameters, `p7..p9` derived.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraParams<T> {
    p: [T; 6],
}

impl<T: Scalar> AlgebraParams<T> {
    pub fn new(p: [T; 6]) -> Self {
        AlgebraParams { p }
    }

    pub fn from_ints(p: [i64; 6]) -> Self {
        Self::new(p.map(T::from_i64))
    }

    /// The cyclic algebra, `p = (0,1,0,0,1,0)`.
    pub fn cyclic() -> Self {
        Self::from_ints([0, 1, 0, 0, 1, 0])
    }

    pub fn free(&self) -> &[T; 6] {
        &self.p
    }

    pub fn p7(&self) -> T {
        let [p1, p2, p3, p4, _, p6] = self.p.clone();
        -p1 * p4.clone() + p2.clone() * p3 - p2 * p6 + p4.clone() * p4
    }

    pub fn p8(&self) -> T {
        let [_, p2, p3, p4, p5, _] = self.p.clone();
        p2 * p5 - p3 * p4
    }

    pub fn p9(&self) -> T {
        let [p1, _, p3, p4, p5, p6] = self.p.clone();
        -p1 * p5.clone() + p3.clone() * p3.clone() - p3 * p6 + p4 * p5
    }

    pub fn derived(&self) -> [T; 3] {
        [self.p7(), self.p8(), self.p9()]
    }

    /// `p1..p9` in order.
    pub fn all(&self) -> [T; 9] {
        let [p7, p8, p9] = self.derived();
        let [p1, p2, p3, p4, p5, p6] = self.p.clone();
        [p1, p2, p3, p4, p5, p6, p7, p8, p9]
    }

    pub fn table(&self) -> StructureTable<T> {
        StructureTable::from_constants(self.all())
    }

    pub fn multiply(&self, a: &Element<T>, b: &Element<T>) -> Element<T> {
        self.table().multiply(a, b)
    }

    /// `(R₁, R₂, R₃)`.
    pub fn representation(&self) -> [Mat3<T>; 3] {
        let t = self.table();
        std::array::from_fn(|i| t.basis_matrix(i))
    }

    pub fn associativity_check(&self) -> ResidualReport {
        self.table().associativity_report()
    }

    pub fn invert(&self, u: &Element<T>) -> Result<Element<T>, AlgebraError> {
        self.table().invert(u)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AlgebraParams<U> {
        AlgebraParams::new(std::array::from_fn(|i| f(&self.p[i])))
    }

    pub fn to_f64(&self) -> AlgebraParams<f64> {
        self.map(|x| x.to_f64())
    }
}

impl AlgebraParams<Rational> {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsJson {
    p: [RationalText; 6],
}

impl Serialize for AlgebraParams<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ParamsJson {
            p: self.p.clone().map(RationalText),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraParams<Rational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ParamsJson::deserialize(deserializer)?;
        Ok(AlgebraParams::new(raw.p.map(|r| r.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn e(i: usize) -> Element<Rational> {
        Element::basis(i)
    }

    #[test]
    fn general_table_products() {
        let p = AlgebraParams::<Rational>::from_ints([2, 3, 5, 7, 11, 13]);
        let [p7, p8, p9] = p.derived();
        assert_eq!(p7, rat(-2 * 7 + 3 * 5 - 3 * 13 + 49));
        assert_eq!(p8, rat(3 * 11 - 5 * 7));
        assert_eq!(p9, rat(-2 * 11 + 25 - 5 * 13 + 7 * 11));
        assert_eq!(p.multiply(&e(1), &e(1)), Element::new(p7, rat(2), rat(3)));
        assert_eq!(p.multiply(&e(1), &e(2)), Element::new(p8, rat(5), rat(7)));
        assert_eq!(p.multiply(&e(2), &e(2)), Element::new(p9, rat(11), rat(13)));
        let u = Element::from_ints([4, -1, 9]);
        assert_eq!(p.multiply(&e(0), &u), u);
        assert!(p.table().is_commutative());
    }

    #[test]
    fn cyclic_constants_and_rep() {
        let p = AlgebraParams::<Rational>::cyclic();
        assert_eq!(p.derived(), [rat(0), rat(1), rat(0)]);
        let [r1, r2, r3] = p.representation();
        assert_eq!(r1, Mat3::identity());
        assert_eq!(r2.mul(&r2).mul(&r2), Mat3::identity());
        assert_eq!(r3, r2.mul(&r2));
        assert_eq!(
            p.multiply(
                &Element::from_ints([1, 1, 0]),
                &Element::from_ints([0, 1, 1])
            ),
            Element::from_ints([1, 1, 2])
        );
    }

    #[test]
    fn perturbed_p7_breaks_associativity() {
        let p = AlgebraParams::<Rational>::from_ints([1, -2, 3, 0, 1, 2]);
        assert!(p.associativity_check().pass);
        let mut c = p.all();
        c[6] += rat(1);
        let report = StructureTable::from_constants(c).associativity_report();
        assert!(!report.pass);
        assert!(report.max_residual > 0.0);
    }

    #[test]
    fn json_round_trip() {
        let p = AlgebraParams::new([
            rat(0),
            rat(1),
            crate::scalar::ratio(-3, 4),
            rat(0),
            rat(1),
            rat(2),
        ]);
        let text = p.to_json();
        assert_eq!(text, r#"{"p":["0","1","-3/4","0","1","2"]}"#);
        assert_eq!(AlgebraParams::from_json(&text).unwrap(), p);
        assert!(AlgebraParams::from_json(r#"{"p":["1","2"]}"#).is_err());
    }
}
