use super::{BinOp, Expr, Func, UnOp};

// Smart constructors that fold constants and drop identity operands. Folding
// only happens when the result stays finite, so evaluation-time domain errors
// are never baked into the tree.

fn c(v: f64) -> Expr {
    Expr::Const(v)
}

fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(v) => Some(*v),
        _ => None,
    }
}

fn fold(op: BinOp, l: Expr, r: Expr) -> Expr {
    if let (Some(a), Some(b)) = (as_const(&l), as_const(&r)) {
        if let Ok(v) = Expr::binary(op, c(a), c(b)).eval(0.0) {
            return c(v);
        }
    }
    Expr::binary(op, l, r)
}

fn add(l: Expr, r: Expr) -> Expr {
    match (as_const(&l), as_const(&r)) {
        (Some(a), _) if a == 0.0 => r,
        (_, Some(b)) if b == 0.0 => l,
        _ => fold(BinOp::Add, l, r),
    }
}

fn sub(l: Expr, r: Expr) -> Expr {
    match (as_const(&l), as_const(&r)) {
        (_, Some(b)) if b == 0.0 => l,
        (Some(a), _) if a == 0.0 => neg(r),
        _ => fold(BinOp::Sub, l, r),
    }
}

fn mul(l: Expr, r: Expr) -> Expr {
    match (as_const(&l), as_const(&r)) {
        (Some(a), _) | (_, Some(a)) if a == 0.0 => c(0.0),
        (Some(a), _) if a == 1.0 => r,
        (_, Some(b)) if b == 1.0 => l,
        _ => fold(BinOp::Mul, l, r),
    }
}

fn div(l: Expr, r: Expr) -> Expr {
    match (as_const(&l), as_const(&r)) {
        (_, Some(b)) if b == 1.0 => l,
        _ => fold(BinOp::Div, l, r),
    }
}

fn pow(l: Expr, r: Expr) -> Expr {
    match as_const(&r) {
        Some(b) if b == 1.0 => l,
        _ => fold(BinOp::Pow, l, r),
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Const(v) => c(-v),
        Expr::Unary(UnOp::Neg, inner) => *inner,
        other => Expr::neg(other),
    }
}

fn call(f: Func, u: &Expr) -> Expr {
    Expr::call(f, u.clone())
}

pub(super) fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => c(0.0),
        Expr::Var => c(1.0),
        Expr::Unary(UnOp::Neg, u) => neg(derivative(u)),
        Expr::Binary(op, l, r) => {
            let (dl, dr) = (derivative(l), derivative(r));
            let (l, r) = (l.as_ref().clone(), r.as_ref().clone());
            match op {
                BinOp::Add => add(dl, dr),
                BinOp::Sub => sub(dl, dr),
                BinOp::Mul => add(mul(dl, r), mul(l, dr)),
                BinOp::Div => div(sub(mul(dl, r.clone()), mul(l, dr)), pow(r, c(2.0))),
                BinOp::Pow => dpow(l, r, dl, dr),
            }
        }
        Expr::Call(f, u) => {
            let du = derivative(u);
            let outer = match f {
                Func::Sin => call(Func::Cos, u),
                Func::Cos => neg(call(Func::Sin, u)),
                Func::Tan => div(c(1.0), pow(call(Func::Cos, u), c(2.0))),
                Func::Arctan => div(c(1.0), add(c(1.0), pow(u.as_ref().clone(), c(2.0)))),
                Func::Exp => call(Func::Exp, u),
                Func::Ln => div(c(1.0), u.as_ref().clone()),
                Func::Log10 => div(c(1.0), mul(u.as_ref().clone(), c(std::f64::consts::LN_10))),
                Func::Abs => div(u.as_ref().clone(), call(Func::Abs, u)),
                Func::Cbrt => div(c(1.0), mul(c(3.0), pow(call(Func::Cbrt, u), c(2.0)))),
                Func::Sqrt => div(c(1.0), mul(c(2.0), call(Func::Sqrt, u))),
            };
            mul(outer, du)
        }
    }
}

fn dpow(base: Expr, exp: Expr, dbase: Expr, dexp: Expr) -> Expr {
    if let Some(k) = as_const(&exp) {
        // k * u^(k-1) * u'
        return mul(mul(c(k), pow(base, c(k - 1.0))), dbase);
    }
    if let Some(a) = as_const(&base) {
        // a^v * ln(a) * v'
        return mul(mul(pow(c(a), exp), call(Func::Ln, &c(a))), dexp);
    }
    // u^v * (v' ln u + v u'/u)
    let whole = pow(base.clone(), exp.clone());
    let term = add(
        mul(dexp, call(Func::Ln, &base)),
        div(mul(exp, dbase), base),
    );
    mul(whole, term)
}
