use std::fmt;

use crate::expr::{parse, Expr};

/// What the published table says a method does from a given start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Iterations(u32),
    Oscillates,
    Diverges,
    Fails,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Iterations(n) => write!(f, "{n}"),
            Expected::Oscillates => f.write_str("Osc"),
            Expected::Diverges => f.write_str("Div"),
            Expected::Fails => f.write_str("Fails"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// Comparison of iteration counts on well-behaved functions.
    Comparison,
    /// Cases where Newton or secant fail.
    Failures,
}

/// Expected columns, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedRow {
    pub secant: Expected,
    pub newton: Expected,
    pub lsq3_fixed: Expected,
    pub lsq3_variable: Expected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Start {
    pub x0: f64,
    pub expected: ExpectedRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub id: &'static str,
    pub source: &'static str,
    pub expr: Expr,
    pub table: Table,
    pub reference_roots: Vec<f64>,
    pub starts: Vec<Start>,
}

impl Problem {
    /// Reference root closest to `x`.
    pub fn nearest_root(&self, x: f64) -> Option<f64> {
        self.reference_roots
            .iter()
            .copied()
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
    }
}

use Expected::{Diverges as D, Fails as F, Iterations as I, Oscillates as O};

fn row(x0: f64, secant: Expected, newton: Expected, fixed: Expected, variable: Expected) -> Start {
    Start {
        x0,
        expected: ExpectedRow {
            secant,
            newton,
            lsq3_fixed: fixed,
            lsq3_variable: variable,
        },
    }
}

fn problem(
    id: &'static str,
    source: &'static str,
    table: Table,
    reference_roots: &[f64],
    starts: Vec<Start>,
) -> Problem {
    let expr = parse(source).unwrap_or_else(|e| panic!("suite expression {id}: {e}"));
    Problem {
        id,
        source,
        expr,
        table,
        reference_roots: reference_roots.to_vec(),
        starts,
    }
}

/// The fourteen functions and 27 runs of the two published tables.
///
/// Roots not listed in the tables (the second real root of the quartic,
/// sixth-power, sin-exp and exponential rows) are included so that a run
/// which legitimately lands on them is not reported as a wrong root.
pub fn builtin_suite() -> Vec<Problem> {
    use Table::{Comparison as T1, Failures as T2};
    let suite = vec![
        problem(
            "cubic",
            "x^3 + 4*x^2 - 10",
            T1,
            &[1.365_230_013_414_1],
            vec![row(0.5, I(10), I(8), I(8), I(8)), row(1.0, I(8), I(6), I(6), I(7))],
        ),
        problem(
            "sin-square",
            "sin(x)^2 - x^2 + 1",
            T1,
            &[-1.404_491_648_215_34, 1.404_491_648_215_34],
            vec![row(-1.0, I(9), I(7), I(7), I(7)), row(-3.0, I(10), I(7), I(7), I(6))],
        ),
        problem(
            "quartic",
            "(x - 2)*(x + 2)^4",
            T1,
            &[-2.0, 2.0],
            vec![
                row(-3.0, I(168), I(119), I(116), I(10)),
                row(1.4, I(116), I(81), I(81), I(14)),
                row(1.5, I(252), I(16), I(15), I(10)),
            ],
        ),
        problem(
            "sixth",
            "(x - 1)^6 - 1",
            T1,
            &[2.0, 0.0],
            vec![row(2.5, I(11), I(8), I(8), I(8)), row(3.5, I(15), I(11), I(11), I(9))],
        ),
        problem(
            "sin-exp",
            "sin(x)*exp(x) + ln(x^2 + 1)",
            T1,
            &[-0.603231971557215, 0.0],
            vec![row(-0.8, I(8), I(7), I(6), I(7)), row(-0.65, I(8), I(5), I(5), I(6))],
        ),
        problem(
            "exp-quadratic",
            "exp(x^2 + 7*x - 30) - 1",
            T1,
            &[3.0, -10.0],
            vec![row(4.0, I(27), I(20), I(20), I(11)), row(4.5, I(39), I(28), I(28), I(16))],
        ),
        problem(
            "x-log",
            "x - 3*ln(x)",
            T1,
            &[1.857_183_860_207_84, 4.536403654973528],
            vec![row(2.0, I(7), I(5), I(5), I(5)), row(0.5, I(11), I(8), I(8), I(8))],
        ),
        problem(
            "quintic",
            "2*x^5 - 3*x^4 + 4*x^3 - x^2 + 10*x - 13",
            T2,
            &[1.053_392_031_515_73],
            vec![row(3.0, I(13), O, I(10), I(7)), row(-2.5, I(14), O, I(11), I(8))],
        ),
        problem("log", "log(x)", T2, &[1.0], vec![row(3.0, F, F, F, I(7))]),
        problem(
            "arctan",
            "arctan(x)",
            T2,
            &[0.0],
            vec![row(3.0, D, D, D, I(7)), row(-3.0, D, D, D, I(7))],
        ),
        problem(
            "quintic-cycle",
            "x^5 - x + 1",
            T2,
            &[-1.167_303_978_261_42],
            vec![row(2.0, I(48), O, O, I(10)), row(-3.0, I(14), O, I(11), I(7))],
        ),
        problem(
            "cubic-cycle",
            "0.5*x^3 - 6*x^2 + 21.5*x - 22",
            T2,
            &[4.0],
            vec![row(3.0, I(7), O, O, I(7))],
        ),
        problem(
            "cube-root",
            "cbrt(x)",
            T2,
            &[0.0],
            vec![row(1.0, O, D, D, I(14)), row(-1.0, O, D, D, I(14))],
        ),
        problem(
            "gauss-bump",
            "10*x*exp(-x^2) - 1",
            T2,
            &[1.679_630_610_428_45, 0.101025848315685],
            vec![row(3.0, D, D, D, I(11)), row(-1.0, D, D, D, I(13))],
        ),
    ];
    for p in &suite {
        for &r in &p.reference_roots {
            let y = p.expr.eval(r).unwrap_or(f64::NAN);
            assert!(y.abs() < 1e-9, "reference root {r} of {} leaves residual {y}", p.id);
        }
        assert!(!p.starts.is_empty());
    }
    suite
}
