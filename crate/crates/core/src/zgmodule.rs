//! Modules over the group ring of a cyclic group `Z_n = <w>`, stored as an
//! integer lattice together with the matrix by which `w` acts on coordinate
//! vectors.
//!
//! Coordinates follow the tuple convention `w.(c1, ..., cn) = (c2, ..., cn, c1)`
//! for the regular module; with it the embedding `(p, q) -> (p, q, -p, -q)` of
//! `N` into `Z[Z4]` is equivariant.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("unknown module name `{0}` (expected trivial|regular|coset2|M|N|L)")]
    UnknownName(String),
    #[error("module `{name}` is not defined for a group of order {order}")]
    BadOrder { name: String, order: usize },
    #[error("group orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("coefficient rings differ")]
    CoeffMismatch,
    #[error("action matrix is invalid: {0}")]
    InvalidAction(String),
}

/// Cyclic group `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicGroup {
    pub order: usize,
}

impl CyclicGroup {
    pub fn new(order: usize) -> Result<Self, ModuleError> {
        if order == 0 {
            return Err(ModuleError::BadOrder {
                name: "Z_n".into(),
                order,
            });
        }
        Ok(CyclicGroup { order })
    }

    pub fn z4() -> Self {
        CyclicGroup { order: 4 }
    }
}

/// Coefficients of a module: the lattice itself, or its reduction mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coeff {
    Z,
    F2,
}

impl Coeff {
    /// Modulus applied to coordinates (0 for the integers).
    pub fn modulus(self) -> u64 {
        match self {
            Coeff::Z => 0,
            Coeff::F2 => 2,
        }
    }
}

impl FromStr for Coeff {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Coeff::Z),
            "f2" => Ok(Coeff::F2),
            other => Err(format!(
                "unknown coefficient ring `{other}` (expected z|f2)"
            )),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Z => write!(f, "Z"),
            Coeff::F2 => write!(f, "F2"),
        }
    }
}

/// The named modules used throughout the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleName {
    Trivial,
    Regular,
    Coset2,
    M,
    N,
    L,
}

impl ModuleName {
    pub const ALL: [ModuleName; 6] = [
        ModuleName::Trivial,
        ModuleName::Regular,
        ModuleName::Coset2,
        ModuleName::M,
        ModuleName::N,
        ModuleName::L,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModuleName::Trivial => "trivial",
            ModuleName::Regular => "regular",
            ModuleName::Coset2 => "coset2",
            ModuleName::M => "M",
            ModuleName::N => "N",
            ModuleName::L => "L",
        }
    }
}

impl FromStr for ModuleName {
    type Err = ModuleError;
    fn from_str(s: &str) -> Result<Self, ModuleError> {
        match s {
            "trivial" => Ok(ModuleName::Trivial),
            "regular" => Ok(ModuleName::Regular),
            "coset2" => Ok(ModuleName::Coset2),
            "M" | "m" => Ok(ModuleName::M),
            "N" | "n" => Ok(ModuleName::N),
            "L" | "l" => Ok(ModuleName::L),
            other => Err(ModuleError::UnknownName(other.to_string())),
        }
    }
}

/// A finitely generated `Z[Z_n]`-module that is free as an abelian group
/// (or its reduction mod 2).
#[derive(Clone, PartialEq, Eq)]
pub struct ZGModule {
    order: usize,
    action: IntMatrix,
    label: String,
    coeff: Coeff,
}

impl ZGModule {
    /// Checks that the action matrix is square, has `action^order = I` and is
    /// invertible over the coefficient ring.
    pub fn new(
        order: usize,
        action: IntMatrix,
        label: impl Into<String>,
        coeff: Coeff,
    ) -> Result<Self, ModuleError> {
        let label = label.into();
        if order == 0 {
            return Err(ModuleError::BadOrder { name: label, order });
        }
        if !action.is_square() {
            return Err(ModuleError::InvalidAction("not square".into()));
        }
        let action = action.reduce_mod(coeff.modulus());
        let n = action.rows();
        let power = action.pow(order).reduce_mod(coeff.modulus());
        if power != IntMatrix::identity(n).reduce_mod(coeff.modulus()) {
            return Err(ModuleError::InvalidAction(format!(
                "action^{order} is not the identity"
            )));
        }
        let det = action.det();
        let unit = match coeff {
            Coeff::Z => det.abs().is_one(),
            Coeff::F2 => det.is_odd(),
        };
        if !unit {
            return Err(ModuleError::InvalidAction(format!(
                "determinant {det} is not a unit"
            )));
        }
        Ok(ZGModule {
            order,
            action,
            label,
            coeff,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `I + A + ... + A^(n-1)`.
    pub fn norm_matrix(&self) -> IntMatrix {
        let mut acc = IntMatrix::zeros(self.rank(), self.rank());
        let mut p = IntMatrix::identity(self.rank());
        for _ in 0..self.order {
            acc = acc.add(&p);
            p = &p * &self.action;
        }
        acc.reduce_mod(self.coeff.modulus())
    }

    /// `A - I`.
    pub fn augmentation_matrix(&self) -> IntMatrix {
        self.action
            .sub(&IntMatrix::identity(self.rank()))
            .reduce_mod(self.coeff.modulus())
    }

    /// The same module with the action multiplied by a sign character
    /// (`w` acting by `sign * A`).
    pub fn twisted(&self, sign: i64) -> Result<ZGModule, ModuleError> {
        let action = self.action.scale(&BigInt::from(sign));
        ZGModule::new(self.order, action, self.label.clone(), self.coeff)
    }

    /// Component orders of the underlying abelian group (0 per coordinate for
    /// lattices, 2 for F2 modules).
    pub fn coordinate_orders(&self) -> Vec<BigInt> {
        vec![BigInt::from(self.coeff.modulus()); self.rank()]
    }
}

impl fmt::Debug for ZGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ZGModule({}, n={}, rank={}, coeff={}, action={})",
            self.label,
            self.order,
            self.rank(),
            self.coeff,
            self.action
        )
    }
}

/// Matrix of the cyclic shift `(c1, ..., ck) -> (c2, ..., ck, c1)`.
fn left_shift(k: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(k, k);
    for i in 0..k {
        m[(i, (i + 1) % k)] = BigInt::one();
    }
    m
}

/// `Z[Z_n / Z_d]` for a subgroup of order `d | n`: rank `n / d`, `w` acting by
/// a cyclic shift of the cosets. `d = 1` is the regular module, `d = n` the
/// trivial one.
pub fn coset_module(n: usize, d: usize) -> Result<ZGModule, ModuleError> {
    if n == 0 || d == 0 || !n.is_multiple_of(d) {
        return Err(ModuleError::BadOrder {
            name: format!("Z[Z{n}/Z{d}]"),
            order: n,
        });
    }
    ZGModule::new(n, left_shift(n / d), format!("Z[Z{n}/Z{d}]"), Coeff::Z)
}

pub fn named_module(name: ModuleName, group: CyclicGroup) -> Result<ZGModule, ModuleError> {
    let n = group.order;
    let need_four = |name: ModuleName| {
        if n != 4 {
            Err(ModuleError::BadOrder {
                name: name.as_str().into(),
                order: n,
            })
        } else {
            Ok(())
        }
    };
    let module = match name {
        ModuleName::Trivial => ZGModule::new(n, IntMatrix::identity(1), "trivial", Coeff::Z)?,
        ModuleName::Regular => ZGModule::new(n, left_shift(n), "regular", Coeff::Z)?,
        ModuleName::Coset2 => {
            if !n.is_multiple_of(2) {
                return Err(ModuleError::BadOrder {
                    name: "coset2".into(),
                    order: n,
                });
            }
            coset_module(n, 2)?.with_label("coset2")
        }
        ModuleName::M => {
            need_four(name)?;
            // Z[Z4]/<norm> in the basis of the images of x1, x2, x3, with
            // x4 = -(x1 + x2 + x3). Coordinates m_i = c_i - c4.
            let a = IntMatrix::from_rows(&[[-1, 1, 0], [-1, 0, 1], [-1, 0, 0]]);
            ZGModule::new(4, a, "M", Coeff::Z)?
        }
        ModuleName::N => {
            need_four(name)?;
            ZGModule::new(4, IntMatrix::from_rows(&[[0, 1], [-1, 0]]), "N", Coeff::Z)?
        }
        ModuleName::L => {
            need_four(name)?;
            // Z[Z4] / image of N, coordinates (c1 + c3, c2 + c4)
            ZGModule::new(4, IntMatrix::from_rows(&[[0, 1], [1, 0]]), "L", Coeff::Z)?
        }
    };
    Ok(module)
}

/// Convenience for the order-4 named modules.
pub fn z4_module(name: ModuleName) -> ZGModule {
    named_module(name, CyclicGroup::z4()).expect("named Z4 modules are well formed")
}

pub fn direct_sum(a: &ZGModule, b: &ZGModule) -> Result<ZGModule, ModuleError> {
    if a.order != b.order {
        return Err(ModuleError::OrderMismatch(a.order, b.order));
    }
    if a.coeff != b.coeff {
        return Err(ModuleError::CoeffMismatch);
    }
    let label = match (a.rank(), b.rank()) {
        (0, _) => b.label.clone(),
        (_, 0) => a.label.clone(),
        _ => format!("{}+{}", a.label, b.label),
    };
    ZGModule::new(a.order, a.action.block_diag(&b.action), label, a.coeff)
}

/// The zero module of a group of order `n`.
pub fn zero_module(n: usize) -> ZGModule {
    ZGModule::new(n, IntMatrix::zeros(0, 0), "0", Coeff::Z).expect("zero module")
}

/// Coefficient change `Z -> F2`.
pub fn mod2_reduce(m: &ZGModule) -> ZGModule {
    ZGModule::new(
        m.order,
        m.action.clone(),
        format!("{}/2", m.label),
        Coeff::F2,
    )
    .expect("reduction of a valid module is valid")
}

/// Equivariant map `source -> target` given by an integer matrix.
pub fn is_equivariant(map: &IntMatrix, source: &ZGModule, target: &ZGModule) -> bool {
    let modulus = target.coeff.modulus();
    (map * source.action()).reduce_mod(modulus) == (target.action() * map).reduce_mod(modulus)
}
