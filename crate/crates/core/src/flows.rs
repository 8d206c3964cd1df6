//! Fields to flows, the BCH product for concatenation, the composition
//! product `♯` and backward error.

use crate::algebra::AlgebraContext;
use crate::error::{AlgebraError, Result};
use crate::hopf::{exp_conc, exp_gl, log_conc, log_gl};
use crate::series::{check_orders, Series};

/// `Φ = log• ∘ exp*`: a formal vector field to the principal part of its flow.
pub fn field_to_flow(ctx: &AlgebraContext, x: &Series) -> Result<Series> {
    ctx.require_primitive(x, "vector field")?;
    log_conc(ctx, &exp_gl(ctx, x)?)
}

/// `log* ∘ exp•`, the inverse of [`field_to_flow`].
pub fn backward_error(ctx: &AlgebraContext, b: &Series) -> Result<Series> {
    ctx.require_primitive(b, "flow")?;
    log_gl(ctx, &exp_conc(ctx, b)?)
}

/// `x +• y = log•(exp•(x) • exp•(y))`.
pub fn bch_conc(ctx: &AlgebraContext, x: &Series, y: &Series) -> Result<Series> {
    check_orders(x.order(), y.order())?;
    ctx.require_primitive(x, "left argument")?;
    ctx.require_primitive(y, "right argument")?;
    bch_unchecked(ctx, x, y)
}

fn bch_unchecked(ctx: &AlgebraContext, x: &Series, y: &Series) -> Result<Series> {
    let g = ctx.conc_mul(&exp_conc(ctx, x)?, &exp_conc(ctx, y)?)?;
    log_conc(ctx, &g)
}

fn check_sharp_args(ctx: &AlgebraContext, x: &Series, y: &Series) -> Result<()> {
    check_orders(x.order(), y.order())?;
    ctx.require_primitive(x, "left argument")?;
    ctx.require_primitive(y, "right argument")
}

/// `x ♯ y = log•(exp•(x) * exp•(y))`.
pub fn sharp_by_definition(ctx: &AlgebraContext, x: &Series, y: &Series) -> Result<Series> {
    check_sharp_args(ctx, x, y)?;
    let g = ctx.gl_mul(&exp_conc(ctx, x)?, &exp_conc(ctx, y)?)?;
    log_conc(ctx, &g)
}

/// `x ♯ y = x +• (exp•(x) ▷ y)`.
pub fn sharp_by_graft(ctx: &AlgebraContext, x: &Series, y: &Series) -> Result<Series> {
    check_sharp_args(ctx, x, y)?;
    let moved = ctx.graft(&exp_conc(ctx, x)?, y)?;
    bch_unchecked(ctx, x, &moved)
}

/// The composition product of principal flows. Debug builds evaluate both
/// formulas and fail with [`AlgebraError::RouteMismatch`] if they differ.
pub fn sharp(ctx: &AlgebraContext, x: &Series, y: &Series) -> Result<Series> {
    let fast = sharp_by_graft(ctx, x, y)?;
    if cfg!(debug_assertions) {
        let slow = sharp_by_definition(ctx, x, y)?;
        if slow != fast {
            return Err(AlgebraError::RouteMismatch(
                "composition product: grafting formula disagrees with definition".into(),
            ));
        }
    }
    Ok(fast)
}

/// The `♯`-inverse: `log•` of the `*`-inverse of `exp•(x)`, obtained as
/// `exp*(−log*(exp•(x)))`.
pub fn sharp_inverse(ctx: &AlgebraContext, x: &Series) -> Result<Series> {
    ctx.require_primitive(x, "flow")?;
    let field = log_gl(ctx, &exp_conc(ctx, x)?)?;
    log_conc(ctx, &exp_gl(ctx, &-&field)?)
}
