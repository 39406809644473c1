use std::fmt;
use std::str::FromStr;

use crate::algebra::Alphabet;
use crate::error::Error;

/// The parameter families: initial data `d`, normal-coordinate values `c`, the
/// normal-ordered constraint constants `sigma`, and the W-constraint constants `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Params {
    D,
    C,
    Sigma,
    Rho,
}

impl Params {
    pub fn prefix(self) -> &'static str {
        match self {
            Params::D => "d",
            Params::C => "c",
            Params::Sigma => "sigma",
            Params::Rho => "rho",
        }
    }

    /// `prefix1, ..., prefix{r-1}`.
    pub fn alphabet(self, r: u32) -> Alphabet {
        Alphabet::indexed(self.prefix(), (r - 1) as usize)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

impl FromStr for Params {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "d" => Ok(Params::D),
            "c" => Ok(Params::C),
            "sigma" => Ok(Params::Sigma),
            "rho" => Ok(Params::Rho),
            _ => Err(Error::InvalidConfig(format!("unknown alphabet {s:?}"))),
        }
    }
}
