//! Ready-made systems: Kepler, the free rigid body, the symmetric top, the
//! harmonic oscillator, the heat operator and the two-operator families
//! `(p^l + …, p^m + …)` in one variable.
//!
//! Momenta are real, `p̂_i = ∂/∂x_i`. Operators usually written with a factor
//! `−i` per momentum differ from these by `p̂ → −i p̂`; commutators vanish and
//! Jacobian ranks agree under any such uniform rescaling, so every verdict is
//! the same in either convention.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::expr::{DomainSpec, Expr};
use crate::ncpoly::NCPolynomial;
use crate::parse::{lower_operator, parse, parse_ncpoly, Scope};

/// Box used for angle coordinates, away from the poles of `cot` and `1/sin`.
pub const ANGLE_BOUNDS: (f64, f64) = (0.1, PI - 0.1);

/// A named list of operators, the first `central` of which should commute
/// with all the others.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSet {
    pub name: String,
    pub members: Vec<String>,
    pub central: usize,
}

/// A noncommutative polynomial with its `G` and `F` slots bound to operators
/// by name.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub name: String,
    pub g: Vec<String>,
    pub f: Vec<String>,
    pub poly: NCPolynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub name: String,
    pub vars: Vec<String>,
    pub domain: DomainSpec,
    pub operators: Vec<(String, DiffOperator)>,
    pub sets: Vec<OperatorSet>,
    pub witnesses: Vec<Witness>,
}

impl System {
    pub fn new(name: &str, vars: &[&str]) -> System {
        System {
            name: name.to_string(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            domain: DomainSpec::new(vars.len()),
            operators: Vec::new(),
            sets: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Coordinates, declared parameters and the operators defined so far.
    pub fn scope(&self) -> Scope {
        Scope {
            vars: self.vars.clone(),
            params: Some(self.domain.params.keys().cloned().collect()),
            ops: self.operators.iter().cloned().collect::<BTreeMap<_, _>>(),
        }
    }

    pub fn operator(&self, name: &str) -> Option<&DiffOperator> {
        self.operators.iter().find(|(n, _)| n == name).map(|(_, op)| op)
    }

    pub fn set(&self, name: &str) -> Option<&OperatorSet> {
        self.sets.iter().find(|s| s.name == name)
    }

    pub fn witness(&self, name: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.name == name)
    }

    pub fn resolve(&self, names: &[String]) -> Result<Vec<DiffOperator>> {
        names
            .iter()
            .map(|n| {
                self.operator(n)
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown operator '{n}'")))
            })
            .collect()
    }

    /// Operators of a named set, in order.
    pub fn set_operators(&self, name: &str) -> Result<(Vec<DiffOperator>, usize)> {
        let set = self
            .set(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown set '{name}'")))?;
        Ok((self.resolve(&set.members)?, set.central))
    }

    pub fn with_param(mut self, name: &str, value: f64) -> System {
        self.domain = self.domain.with_param(name, value);
        self
    }

    pub fn with_bounds(mut self, i: usize, lo: f64, hi: f64) -> System {
        self.domain = self.domain.with_bounds(i, lo, hi);
        self
    }

    /// Adds an operator given in the text syntax, with earlier operators in scope.
    pub fn define(&mut self, name: &str, text: &str) -> Result<()> {
        let op = lower_operator(&parse(text)?, &self.scope())?;
        self.insert(name, op);
        Ok(())
    }

    pub fn insert(&mut self, name: &str, op: DiffOperator) {
        match self.operators.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = op,
            None => self.operators.push((name.to_string(), op)),
        }
    }

    pub fn add_set(&mut self, name: &str, members: &[&str], central: usize) {
        self.sets.push(OperatorSet {
            name: name.to_string(),
            members: members.iter().map(|m| m.to_string()).collect(),
            central,
        });
    }

    pub fn add_witness(&mut self, name: &str, g: &[&str], f: &[&str], text: &str) -> Result<()> {
        let poly = parse_ncpoly(text, g.len(), f.len())?;
        self.witnesses.push(Witness {
            name: name.to_string(),
            g: g.iter().map(|s| s.to_string()).collect(),
            f: f.iter().map(|s| s.to_string()).collect(),
            poly,
        });
        Ok(())
    }
}

fn built(r: Result<()>) {
    r.expect("catalog definitions parse");
}

/// `H = |p|²/2 − a/r` and `M = x × p` on `ℝ³∖{0}`; one central operator.
pub fn kepler(alpha: f64) -> System {
    let mut s = System::new("kepler", &["x1", "x2", "x3"]).with_param("a", alpha);
    s.domain = s.domain.exclude(
        crate::parse::parse_expr("x1^2 + x2^2 + x3^2", 3)
            .expect("literal")
            .simplify(),
    );
    built(s.define("H", "1/2*(p1^2 + p2^2 + p3^2) - a/sqrt(x1^2 + x2^2 + x3^2)"));
    built(s.define("Mx", "x2*p3 - x3*p2"));
    built(s.define("My", "x3*p1 - x1*p3"));
    built(s.define("Mz", "x1*p2 - x2*p1"));
    s.add_set("integrals", &["H", "Mx", "My", "Mz"], 1);
    s
}

/// Body-frame momenta `Γ_i` and space-frame momenta `M_x, M_y, M_z` in Euler
/// angles `(phi, theta, psi)`.
fn euler_angles(name: &str) -> System {
    let mut s = System::new(name, &["phi", "theta", "psi"]);
    for i in 0..3 {
        s = s.with_bounds(i, ANGLE_BOUNDS.0, ANGLE_BOUNDS.1);
    }
    built(s.define("G1", "sin(psi)/sin(theta)*p1 + cos(psi)*p2 - cot(theta)*sin(psi)*p3"));
    built(s.define("G2", "cos(psi)/sin(theta)*p1 - sin(psi)*p2 - cot(theta)*cos(psi)*p3"));
    built(s.define("G3", "p3"));
    built(s.define("Mx", "-sin(phi)*cot(theta)*p1 + cos(phi)*p2 + sin(phi)/sin(theta)*p3"));
    built(s.define("My", "cos(phi)*cot(theta)*p1 + sin(phi)*p2 - cos(phi)/sin(theta)*p3"));
    built(s.define("Mz", "p1"));
    s
}

/// Free rigid body with moments of inertia `I1, I2, I3`:
/// `H = (Γ_1²/I1 + Γ_2²/I2 + Γ_3²/I3)/2`, set `(H, M²; Mx, My)` with two central operators.
pub fn rigid_body(i1: f64, i2: f64, i3: f64) -> System {
    let mut s = euler_angles("rigid_body");
    s = s.with_param("I1", i1).with_param("I2", i2).with_param("I3", i3);
    built(s.define("H", "1/2*(G1*G1/I1 + G2*G2/I2 + G3*G3/I3)"));
    built(s.define("M2", "Mx*Mx + My*My + Mz*Mz"));
    s.add_set("integrals", &["H", "M2", "Mx", "My"], 2);
    s
}

/// Heavy top: the rigid-body kinetic energy plus `g cos(theta)`, with set
/// `(H, Mz, Γ_3)` of three central operators. The set commutes only when `I1 = I2`.
pub fn heavy_top(i1: f64, i2: f64, i3: f64, g: f64) -> System {
    let name = if i1 == i2 { "symmetric_top" } else { "asymmetric_top" };
    let mut s = euler_angles(name);
    s = s
        .with_param("I1", i1)
        .with_param("I2", i2)
        .with_param("I3", i3)
        .with_param("g", g);
    built(s.define("H", "1/2*(G1*G1/I1 + G2*G2/I2 + G3*G3/I3) + g*cos(theta)"));
    s.add_set("integrals", &["H", "Mz", "G3"], 3);
    s
}

pub fn symmetric_top(i1: f64, i3: f64, g: f64) -> System {
    heavy_top(i1, i1, i3, g)
}

/// `H = Σ ω_i (p_i² + x_i²)/2` with the blocks `B_i = (p_i² + x_i²)/2` as an
/// integrable set with `n` central operators.
pub fn oscillator(omega: &[f64]) -> System {
    let n = omega.len();
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut s = System::new("oscillator", &var_refs);
    let mut h = Vec::new();
    for (i, &w) in omega.iter().enumerate() {
        s = s.with_param(&format!("w{}", i + 1), w);
        built(s.define(&format!("B{}", i + 1), &format!("(p{0}^2 + x{0}^2)/2", i + 1)));
        h.push(format!("w{0}*B{0}", i + 1));
    }
    built(s.define("H", &h.join(" + ")));
    let blocks: Vec<String> = (1..=n).map(|i| format!("B{i}")).collect();
    let block_refs: Vec<&str> = blocks.iter().map(String::as_str).collect();
    s.add_set("blocks", &block_refs, n);
    s
}

/// `H = p_t − Δ + Σ U_i(y_i)` in `(t, y_1..y_n)`. Each potential is an
/// expression in `Var(0)`, standing for its own coordinate `y_i`. The blocks
/// `(p_t, −p_{y_i}² + U_i)` form an integrable set with `n + 1` central operators.
pub fn heat_operator(potentials: &[Expr]) -> System {
    let n = potentials.len();
    let mut vars = vec!["t".to_string()];
    vars.extend((1..=n).map(|i| format!("y{i}")));
    let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut s = System::new("heat", &var_refs);
    let dim = n + 1;
    let pt = DiffOperator::momentum(dim, 0);
    s.insert("Pt", pt.clone());
    let mut h = pt;
    let mut members = vec!["Pt".to_string()];
    for (i, u) in potentials.iter().enumerate() {
        let coord = i + 1;
        let lap = DiffOperator::momentum(dim, coord).pow(2);
        let block = DiffOperator::coefficient(dim, u.relabel(&|_| coord))
            .try_sub(&lap)
            .expect("same dimension");
        h = h.try_add(&block).expect("same dimension");
        let name = format!("B{coord}");
        s.insert(&name, block);
        members.push(name);
    }
    s.insert("H", h);
    let member_refs: Vec<&str> = members.iter().map(String::as_str).collect();
    s.add_set("blocks", &member_refs, n + 1);
    s
}

/// `W1 = p^l + Σ_{i<l} f_i p^i` and `W2 = p^m + Σ_{i<m} g_i p^i` in one variable,
/// with `l = f.len()` and `m = g.len()`; the coefficients are expressions in `x1`.
pub fn appendix_pair(name: &str, f: &[Expr], g: &[Expr]) -> System {
    let mut s = System::new(name, &["x1"]);
    let build = |coeffs: &[Expr]| {
        let top = coeffs.len() as u32;
        let mut terms = vec![(crate::MultiIndex::new(vec![top]), Expr::one())];
        terms.extend(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (crate::MultiIndex::new(vec![i as u32]), c.clone())),
        );
        DiffOperator::from_terms(1, terms)
    };
    s.insert("W1", build(f));
    s.insert("W2", build(g));
    s.add_set("pair", &["W1", "W2"], 0);
    s
}

fn x1(text: &str) -> Expr {
    crate::parse::parse_expr(text, 1).expect("literal")
}

/// Built-in systems by name, with default parameters.
pub const NAMES: &[&str] = &[
    "kepler",
    "rigid_body",
    "symmetric_top",
    "asymmetric_top",
    "oscillator",
    "heat",
    "appendix_shift",
    "appendix_cubic",
    "appendix_sine",
];

pub fn by_name(name: &str) -> Option<System> {
    Some(match name {
        "kepler" => kepler(1.0),
        "rigid_body" => rigid_body(1.0, 2.0, 3.0),
        "symmetric_top" => symmetric_top(1.0, 2.0, 1.0),
        "asymmetric_top" => heavy_top(1.0, 1.5, 2.0, 1.0),
        "oscillator" => oscillator(&[1.0, 2.0, 3.0]),
        "heat" => heat_operator(&[x1("x1^2"), x1("cos(x1)")]),
        "appendix_shift" => {
            let mut s = appendix_pair(name, &[x1("x1^2")], &[x1("x1^2 + 3")]);
            built(s.add_witness("shift", &[], &["W1", "W2"], "F1 - F2 + 3"));
            s
        }
        "appendix_cubic" => appendix_pair(name, &[x1("x1^2")], &[x1("x1^3")]),
        "appendix_sine" => {
            let mut s = appendix_pair(name, &[x1("sin(x1)")], &[x1("sin(x1) - 1")]);
            built(s.add_witness("shift", &[], &["W1", "W2"], "F1 - F2 - 1"));
            s
        }
        _ => return None,
    })
}
