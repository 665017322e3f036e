//! State mini-language: `fock:n`, `coherent:re,im`, `cat:re,im`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use phase_ovm::fock::{coherent_state, even_cat_state, fock_state, Operator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Fock(usize),
    Coherent(Complex<f64>),
    Cat(Complex<f64>),
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("expected fock:n, coherent:re,im or cat:re,im, got '{s}'"))?;
        match kind {
            "fock" => arg
                .trim()
                .parse()
                .map(StateSpec::Fock)
                .map_err(|_| format!("bad photon number '{arg}'")),
            "coherent" => parse_complex(arg).map(StateSpec::Coherent),
            "cat" => parse_complex(arg).map(StateSpec::Cat),
            _ => Err(format!("unknown state kind '{kind}'")),
        }
    }
}

pub fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite());
    match parts.as_slice() {
        [re] => num(re).map(|r| Complex::new(r, 0.0)),
        [re, im] => num(re).zip(num(im)).map(|(r, i)| Complex::new(r, i)),
        _ => None,
    }
    .ok_or_else(|| format!("bad complex amplitude '{s}'"))
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock(n) => write!(f, "fock:{n}"),
            StateSpec::Coherent(a) => write!(f, "coherent:{},{}", a.re, a.im),
            StateSpec::Cat(a) => write!(f, "cat:{},{}", a.re, a.im),
        }
    }
}

impl StateSpec {
    pub fn density(&self, dim: usize) -> Result<Operator<f64>, String> {
        match *self {
            StateSpec::Fock(n) => fock_state(n, dim)
                .map(|k| k.projector())
                .map_err(|e| e.to_string()),
            StateSpec::Coherent(a) => Ok(coherent_state(a, dim).state.projector()),
            StateSpec::Cat(a) => Ok(even_cat_state(a, dim).state.projector()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!("fock:3".parse(), Ok(StateSpec::Fock(3)));
        assert_eq!("coherent:2,-0.5".parse(), Ok(StateSpec::Coherent(Complex::new(2.0, -0.5))));
        assert_eq!("cat:2".parse(), Ok(StateSpec::Cat(Complex::new(2.0, 0.0))));
        for bad in ["fock", "fock:-1", "squeezed:1", "coherent:a,b", "cat:1,2,3", "coherent:nan"] {
            assert!(bad.parse::<StateSpec>().is_err(), "{bad}");
        }
        let s: StateSpec = "coherent:1.5,2".parse().unwrap();
        assert_eq!(s.to_string().parse::<StateSpec>(), Ok(s));
    }

    #[test]
    fn fock_outside_dim_is_rejected() {
        assert!(StateSpec::Fock(10).density(10).is_err());
        assert!(StateSpec::Fock(9).density(10).is_ok());
    }
}
