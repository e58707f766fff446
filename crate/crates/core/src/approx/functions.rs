use crate::{Complex, Error, Result};

/// Named test functions for the approximation commands.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    /// `f_ζ(z) = 1/(ζ − z)`.
    Cauchy(Complex),
    /// Monomial coefficients, constant term first.
    Poly(Vec<Complex>),
    /// `|z|`, continuous but nowhere holomorphic.
    Abs,
    /// `z̄^k`: smooth, and polynomial on real sets only.
    ConjSmooth(u32),
}

impl TestFunction {
    pub fn eval(&self, z: Complex) -> Complex {
        match self {
            TestFunction::Cauchy(zeta) => 1.0 / (zeta - z),
            TestFunction::Poly(c) => c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &a| acc * z + a),
            TestFunction::Abs => Complex::new(z.norm(), 0.0),
            TestFunction::ConjSmooth(k) => z.conj().powu(*k),
        }
    }

    pub fn samples(&self, points: &[Complex]) -> Result<Vec<Complex>> {
        let v: Vec<Complex> = points.iter().map(|&z| self.eval(z)).collect();
        check_finite(&v)?;
        Ok(v)
    }

    /// Parse `cauchy(re,im)`, `poly(c0,c1,...)`, `abs`, `conj(k)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("unknown function `{s}`"));
        if s == "abs" {
            return Ok(TestFunction::Abs);
        }
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let name = &s[..open];
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(',')
            .filter(|a| !a.trim().is_empty())
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match name {
            "cauchy" if args.len() == 1 || args.len() == 2 => Ok(TestFunction::Cauchy(Complex::new(
                args[0],
                args.get(1).copied().unwrap_or(0.0),
            ))),
            "poly" if !args.is_empty() => Ok(TestFunction::Poly(
                args.iter().map(|&a| Complex::new(a, 0.0)).collect(),
            )),
            "conj" if args.len() == 1 && args[0] >= 0.0 => Ok(TestFunction::ConjSmooth(args[0] as u32)),
            _ => Err(bad()),
        }
    }
}

pub(crate) fn check_finite(v: &[Complex]) -> Result<()> {
    match v.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(i) => Err(Error::NonFiniteSample(i)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let f = TestFunction::parse("cauchy(2, 0)").unwrap();
        assert_eq!(f.eval(Complex::new(1.0, 0.0)), Complex::new(1.0, 0.0));
        let p = TestFunction::parse("poly(1,0,3)").unwrap();
        assert_eq!(p.eval(Complex::new(2.0, 0.0)), Complex::new(13.0, 0.0));
        assert!(TestFunction::parse("sinh(1)").is_err());
        assert_eq!(TestFunction::parse("abs").unwrap(), TestFunction::Abs);
    }
}
