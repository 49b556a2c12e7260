//! The nine forward reductions and their traces.

mod fhf_fphf;
mod fphf_sff;
mod len_2len;
mod lp_len;
mod onelen_fhf;
mod sff_2cff;
mod trace;
mod twocff_2cfr;
mod twocfr_2cf;
mod twolen_onelen;

pub use fhf_fphf::fhf_to_fphf;
pub use fphf_sff::fphf_to_sff;
pub use len_2len::{len_to_2len, render_equations};
pub use lp_len::lp_to_len;
pub use onelen_fhf::onelen_to_fhf;
pub use sff_2cff::sff_to_2cff;
pub use trace::*;
pub use twocff_2cfr::twocff_to_2cfr;
pub use twocfr_2cf::twocfr_to_2cf;
pub use twolen_onelen::twolen_to_onelen;

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::model::{Class, Instance};

/// Sign and strictly decreasing exponents with z = sign * sum 2^l.
pub fn binary_representation(z: &Int) -> (i8, Vec<u64>) {
    let sign = match z.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    };
    let mag = z.magnitude();
    let mut exps = Vec::new();
    let mut l = mag.bits();
    while l > 0 {
        l -= 1;
        if mag.bit(l) {
            exps.push(l);
        }
    }
    (sign, exps)
}

/// One reduction step, named by its source and target classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    LpLen,
    LenTwoLen,
    TwoLenOneLen,
    OneLenFhf,
    FhfFphf,
    FphfSff,
    SffTwoCff,
    TwoCffTwoCfr,
    TwoCfrTwoCf,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::LpLen,
        Stage::LenTwoLen,
        Stage::TwoLenOneLen,
        Stage::OneLenFhf,
        Stage::FhfFphf,
        Stage::FphfSff,
        Stage::SffTwoCff,
        Stage::TwoCffTwoCfr,
        Stage::TwoCfrTwoCf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::LpLen => "lp-len",
            Stage::LenTwoLen => "len-2len",
            Stage::TwoLenOneLen => "2len-1len",
            Stage::OneLenFhf => "1len-fhf",
            Stage::FhfFphf => "fhf-fphf",
            Stage::FphfSff => "fphf-sff",
            Stage::SffTwoCff => "sff-2cff",
            Stage::TwoCffTwoCfr => "2cff-2cfr",
            Stage::TwoCfrTwoCf => "2cfr-2cf",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }

    pub fn index(&self) -> usize {
        Stage::ALL.iter().position(|s| s == self).unwrap()
    }

    pub fn source(&self) -> Class {
        let i = self.index();
        Class::ALL[if i <= 2 { i } else { i - 1 }]
    }

    pub fn target(&self) -> Class {
        let i = self.index();
        Class::ALL[if i <= 1 { i + 1 } else { i }]
    }
}

/// Applies one stage to an instance of its source class.
pub fn reduce(stage: Stage, inst: &Instance) -> Result<(Instance, Trace)> {
    Ok(match (stage, inst) {
        (Stage::LpLen, Instance::Lp(lp)) => {
            let (o, t) = lp_to_len(lp)?;
            (Instance::Len(o), Trace::LpLen(t))
        }
        (Stage::LenTwoLen, Instance::Len(l)) => {
            let (o, t) = len_to_2len(l)?;
            (Instance::KLen(o), Trace::LenTwoLen(t))
        }
        (Stage::LenTwoLen, Instance::KLen(l)) => {
            let (o, t) = len_to_2len(&l.as_len())?;
            (Instance::KLen(o), Trace::LenTwoLen(t))
        }
        (Stage::TwoLenOneLen, Instance::KLen(l)) => {
            let (o, t) = twolen_to_onelen(l)?;
            (Instance::KLen(o), Trace::TwoLenOneLen(t))
        }
        (Stage::OneLenFhf, Instance::KLen(l)) => {
            let (o, t) = onelen_to_fhf(l)?;
            (Instance::Fhf(o), Trace::OneLenFhf(t))
        }
        (Stage::FhfFphf, Instance::Fhf(h)) => {
            let (o, t) = fhf_to_fphf(h)?;
            (Instance::Fphf(o), Trace::FhfFphf(t))
        }
        (Stage::FphfSff, Instance::Fphf(p)) => {
            let (o, t) = fphf_to_sff(p)?;
            (Instance::Sff(o), Trace::FphfSff(t))
        }
        (Stage::SffTwoCff, Instance::Sff(s)) => {
            let (o, t) = sff_to_2cff(s)?;
            (Instance::TwoCff(o), Trace::SffTwoCff(t))
        }
        (Stage::TwoCffTwoCfr, Instance::TwoCff(f)) => {
            let (o, t) = twocff_to_2cfr(f)?;
            (Instance::TwoCfr(o), Trace::TwoCffTwoCfr(t))
        }
        (Stage::TwoCfrTwoCf, Instance::TwoCfr(r)) => {
            let (o, t) = twocfr_to_2cf(r)?;
            (Instance::TwoCf(o), Trace::TwoCfrTwoCf(t))
        }
        (stage, inst) => {
            return Err(Error::invalid(format!(
                "stage {} expects a {} instance, got {}",
                stage.name(),
                stage.source().schema(),
                inst.class().schema()
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn binary_representation_examples() {
        assert_eq!(binary_representation(&int(-5)), (-1, vec![2, 0]));
        assert_eq!(binary_representation(&int(0)), (0, vec![]));
        assert_eq!(binary_representation(&int(7)), (1, vec![2, 1, 0]));
        assert_eq!(binary_representation(&int(8)), (1, vec![3]));
    }

    #[test]
    fn stage_names_round_trip() {
        for s in Stage::ALL {
            assert_eq!(Stage::parse(s.name()), Some(s));
        }
        assert_eq!(Stage::OneLenFhf.source(), Class::KLen);
        assert_eq!(Stage::OneLenFhf.target(), Class::Fhf);
        assert_eq!(Stage::TwoLenOneLen.target(), Class::KLen);
    }
}
