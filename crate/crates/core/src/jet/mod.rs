//! Jet-space expressions, the total derivative and prolongation of vector
//! fields to `J^n`.

mod eval;
mod expr;
mod field;

pub use eval::{evaluate_with, Arith, EvalError, HighPrecision, JetPoint, F64};
pub use expr::{Func, JetExpr, JetVar, Node, MAX_ORDER};
pub use field::{
    contact_bracket_expr, prolong_contact, prolong_contact_poly, prolong_plane, total_derivative,
    total_derivative_auto, JetField,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("jet order {order} exceeds the supported maximum")]
    OrderOverflow { order: u8 },
    #[error("contact prolongation needs order at least 1, got {0}")]
    OrderTooLow(u8),
    #[error("plane field coefficient `{0}` depends on jet coordinates beyond y0")]
    NotPlane(String),
    #[error("characteristic function `{0}` depends on jet coordinates beyond y1")]
    NotContact(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
