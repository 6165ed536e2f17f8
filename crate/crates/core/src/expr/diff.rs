use super::{Expr, Func};
use crate::error::{Error, Result};

impl Expr {
    /// Exact partial derivative `∂/∂x_i`, simplified.
    ///
    /// `dim` is the declared dimension; `i` must be below it.
    pub fn differentiate(&self, i: usize, dim: usize) -> Result<Expr> {
        if i >= dim {
            return Err(Error::VariableOutOfRange { index: i, dim });
        }
        Ok(self.derivative(i))
    }

    /// Unchecked derivative with respect to `Var(i)`, simplified.
    pub fn derivative(&self, i: usize) -> Expr {
        if !self.depends_on(i) {
            return Expr::zero();
        }
        self.raw_derivative(i).simplify()
    }

    fn raw_derivative(&self, i: usize) -> Expr {
        if !self.depends_on(i) {
            return Expr::zero();
        }
        match self {
            Expr::Const(_) | Expr::Param(_) => Expr::zero(),
            Expr::Var(j) => {
                if *j == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Add(ts) => Expr::Add(ts.iter().map(|t| t.raw_derivative(i)).collect()),
            Expr::Mul(fs) => {
                let mut terms = Vec::new();
                for (k, f) in fs.iter().enumerate() {
                    if !f.depends_on(i) {
                        continue;
                    }
                    let mut factors = fs.clone();
                    factors[k] = f.raw_derivative(i);
                    terms.push(Expr::Mul(factors));
                }
                Expr::sum(terms)
            }
            Expr::Pow(b, k) => Expr::Mul(vec![Expr::int(*k), Expr::Pow(b.clone(), k - 1), b.raw_derivative(i)]),
            Expr::Func(f, a) => {
                let inner = a.raw_derivative(i);
                let a = (**a).clone();
                let outer = match f {
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Tan => a.cos().pow(-2),
                    Func::Cot => -a.sin().pow(-2),
                    Func::Exp => a.exp(),
                    Func::Sqrt => Expr::rat(1, 2) * a.sqrt().pow(-1),
                    Func::Neg => Expr::int(-1),
                    Func::Recip => -a.pow(-2),
                };
                outer * inner
            }
        }
    }
}
