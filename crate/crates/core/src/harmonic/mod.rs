//! Affine maps `φ(q) = Aq + k` and the φ-harmonicity condition
//! `φ_x² + φ_y² + φ_z² = 0`.

mod solver;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AlgebraParams, Element};
use crate::linalg::Mat3;
use crate::scalar::{Rational, RationalText, Scalar};

pub use solver::{
    solve_joint, solve_matrix, solve_matrix_with_starts, solve_params, solve_params_with_starts,
    JointCandidate, MatrixCandidate, ParamsCandidate, SolverConfig, SolverError,
};

/// `φ(q) = A·q + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    pub a: Mat3<T>,
    pub k: Element<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn new(a: Mat3<T>, k: Element<T>) -> Self {
        AffineMap { a, k }
    }

    pub fn linear(a: Mat3<T>) -> Self {
        AffineMap::new(a, Element::zero())
    }

    pub fn from_ints(a: [[i64; 3]; 3], k: [i64; 3]) -> Self {
        AffineMap::new(
            Mat3::from_fn(|i, j| T::from_i64(a[i][j])),
            Element::from_ints(k),
        )
    }

    /// `A = [[−1,−1,0],[1,0,−1],[0,1,1]]`, the map that makes the cyclic
    /// algebra φ-harmonic.
    pub fn cyclic_harmonic() -> Self {
        Self::from_ints([[-1, -1, 0], [1, 0, -1], [0, 1, 1]], [0, 0, 0])
    }

    pub fn identity() -> Self {
        AffineMap::linear(Mat3::identity())
    }

    pub fn with_offset(&self, k: Element<T>) -> Self {
        AffineMap::new(self.a.clone(), k)
    }

    pub fn apply(&self, q: &[T; 3]) -> Element<T> {
        Element(self.a.apply(q)) + self.k.clone()
    }

    /// `(φ_x, φ_y, φ_z)`, the columns of `A`.
    pub fn partials(&self) -> [Element<T>; 3] {
        std::array::from_fn(|j| Element(self.a.column(j)))
    }

    pub fn is_zero(&self) -> bool {
        self.a.0.iter().flatten().all(|x| x.is_negligible())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AffineMap<U> {
        AffineMap::new(self.a.map(&f), self.k.map(&f))
    }

    pub fn to_f64(&self) -> AffineMap<f64> {
        self.map(|x| x.to_f64())
    }
}

impl AffineMap<Rational> {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serialize")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    #[serde(rename = "A")]
    a: [[RationalText; 3]; 3],
    #[serde(default)]
    k: Option<[RationalText; 3]>,
}

impl Serialize for AffineMap<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MapJson {
            a: self.a.0.clone().map(|row| row.map(RationalText)),
            k: Some(self.k.0.clone().map(RationalText)),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AffineMap<Rational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MapJson::deserialize(deserializer)?;
        let k = raw
            .k
            .map(|k| Element(k.map(|r| r.0)))
            .unwrap_or_else(Element::zero);
        Ok(AffineMap::new(Mat3(raw.a.map(|row| row.map(|r| r.0))), k))
    }
}

/// `φ_x², φ_y², φ_z², φ_xφ_y, φ_xφ_z, φ_yφ_z`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondProducts<T> {
    pub xx: Element<T>,
    pub yy: Element<T>,
    pub zz: Element<T>,
    pub xy: Element<T>,
    pub xz: Element<T>,
    pub yz: Element<T>,
}

impl<T: Scalar> SecondProducts<T> {
    pub fn square_sum(&self) -> Element<T> {
        self.xx.clone() + self.yy.clone() + self.zz.clone()
    }

    pub fn as_array(&self) -> [&Element<T>; 6] {
        [&self.xx, &self.yy, &self.zz, &self.xy, &self.xz, &self.yz]
    }
}

pub fn phi_partials<T: Scalar>(phi: &AffineMap<T>) -> [Element<T>; 3] {
    phi.partials()
}

/// Products of the partials computed with the algebra's multiplication table.
pub fn second_products<T: Scalar>(phi: &AffineMap<T>, p: &AlgebraParams<T>) -> SecondProducts<T> {
    let t = p.table();
    let [x, y, z] = phi.partials();
    SecondProducts {
        xx: t.multiply(&x, &x),
        yy: t.multiply(&y, &y),
        zz: t.multiply(&z, &z),
        xy: t.multiply(&x, &y),
        xz: t.multiply(&x, &z),
        yz: t.multiply(&y, &z),
    }
}

/// The same six products from their coordinate expansion in `p1..p6`.
pub fn second_products_expanded<T: Scalar>(
    phi: &AffineMap<T>,
    p: &AlgebraParams<T>,
) -> SecondProducts<T> {
    let [p1, p2, p3, p4, p5, p6] = p.free().clone();
    let p7 = p4.clone() * p4.clone() - p1.clone() * p4.clone() + p2.clone() * p3.clone()
        - p2.clone() * p6.clone();
    let p8 = p2.clone() * p5.clone() - p3.clone() * p4.clone();
    let p9 = p3.clone() * p3.clone() - p1.clone() * p5.clone() - p3.clone() * p6.clone()
        + p4.clone() * p5.clone();
    let prod = |a: &Element<T>, b: &Element<T>| {
        let [a1, a2, a3] = a.0.clone();
        let [b1, b2, b3] = b.0.clone();
        let s22 = a2.clone() * b2.clone();
        let s23 = a2.clone() * b3.clone() + a3.clone() * b2.clone();
        let s33 = a3.clone() * b3.clone();
        Element([
            a1.clone() * b1.clone()
                + p7.clone() * s22.clone()
                + p8.clone() * s23.clone()
                + p9.clone() * s33.clone(),
            a1.clone() * b2
                + a2 * b1.clone()
                + p1.clone() * s22.clone()
                + p3.clone() * s23.clone()
                + p5.clone() * s33.clone(),
            a1 * b3 + a3 * b1 + p2.clone() * s22 + p4.clone() * s23 + p6.clone() * s33,
        ])
    };
    let [x, y, z] = phi.partials();
    SecondProducts {
        xx: prod(&x, &x),
        yy: prod(&y, &y),
        zz: prod(&z, &z),
        xy: prod(&x, &y),
        xz: prod(&x, &z),
        yz: prod(&y, &z),
    }
}

/// Coefficients of `φ_x² + φ_y² + φ_z²`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicityResidual<T> {
    pub r: Element<T>,
}

impl<T: Scalar> HarmonicityResidual<T> {
    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn max_abs(&self) -> T {
        self.r.max_abs()
    }
}

/// Row norms and row inner products of `A` used by the harmonicity equations.
pub(crate) struct RowGram<T> {
    pub n1: T,
    pub n2: T,
    pub n3: T,
    pub d12: T,
    pub d13: T,
    pub d23: T,
}

impl<T: Scalar> RowGram<T> {
    pub fn of(a: &Mat3<T>) -> Self {
        let dot = |i: usize, j: usize| {
            (0..3).fold(T::zero(), |acc, c| {
                acc + a.0[i][c].clone() * a.0[j][c].clone()
            })
        };
        RowGram {
            n1: dot(0, 0),
            n2: dot(1, 1),
            n3: dot(2, 2),
            d12: dot(0, 1),
            d13: dot(0, 2),
            d23: dot(1, 2),
        }
    }

    /// `(e₁, e₂, e₃)` coefficients given all nine constants.
    pub fn residual(&self, p: &[T; 9]) -> [T; 3] {
        let two = T::from_i64(2);
        let [p1, p2, p3, p4, p5, p6, p7, p8, p9] = p.clone();
        [
            self.n1.clone()
                + self.n2.clone() * p7
                + self.n3.clone() * p9
                + two.clone() * self.d23.clone() * p8,
            self.n2.clone() * p1
                + self.n3.clone() * p5
                + two.clone() * self.d12.clone()
                + two.clone() * self.d23.clone() * p3,
            self.n2.clone() * p2
                + self.n3.clone() * p6
                + two.clone() * self.d13.clone()
                + two * self.d23.clone() * p4,
        ]
    }
}

pub fn harmonicity_residual<T: Scalar>(
    phi: &AffineMap<T>,
    p: &AlgebraParams<T>,
) -> HarmonicityResidual<T> {
    HarmonicityResidual {
        r: Element(RowGram::of(&phi.a).residual(&p.all())),
    }
}

/// The six equations in unknowns `x1..x9`: three defining `x7..x9`, then the
/// `e₂`, `e₃` and `e₁` harmonicity equations.
pub fn system_residual<T: Scalar>(x: &[T; 9], phi: &AffineMap<T>) -> [T; 6] {
    let [x1, x2, x3, x4, x5, x6, x7, x8, x9] = x.clone();
    let derived = AlgebraParams::new([x1, x2, x3, x4, x5, x6]).derived();
    let [h1, h2, h3] = RowGram::of(&phi.a).residual(x);
    [
        x7 - derived[0].clone(),
        x8 - derived[1].clone(),
        x9 - derived[2].clone(),
        h2,
        h3,
        h1,
    ]
}
