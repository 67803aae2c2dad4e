//! Plain-text cocycle files.
//!
//! ```text
//! ergolab-cocycle 1
//! <cocycle>
//! end
//! ```
//!
//! where `<cocycle>` is one of
//!
//! ```text
//! constant mobius <a> <b> <c> <d>
//! constant homeo <m>            followed by m lines "bp <x> <y>"
//! herman <lambda>
//! path-cocycle cosine           followed by <path>
//! path-cocycle theta <alpha> <N> <gamma>   followed by <path>
//! coboundary                    followed by a nested <cocycle>
//! ```
//!
//! and `<path>` is a line `path <k>` followed by `k` anchors, each a line
//! `anchor <t> <m>` and `m` breakpoint lines. Reals are written in the
//! shortest form that parses back to the same bits.

use std::sync::Arc;

use super::cocycle::{Cocycle, MobiusFamily, ParamMap};
use super::fiber::FiberMap;
use super::homeo::CircleHomeo;
use super::path::HomeoPath;
use super::projective::Mat2;
use crate::coboundary::{ThetaMap, ThetaParams};
use crate::error::{Error, Result};

const HEADER: &str = "ergolab-cocycle 1";
const MAX_DEPTH: usize = 8;
const MAX_COUNT: usize = 1 << 20;

fn write_homeo(out: &mut String, h: &CircleHomeo) {
    let (xs, ys) = h.breakpoints();
    for (x, y) in xs.iter().zip(ys) {
        out.push_str(&format!("bp {x} {y}\n"));
    }
}

fn write_cocycle(out: &mut String, c: &Cocycle) {
    match c {
        Cocycle::Constant(FiberMap::Mobius(m)) => {
            out.push_str(&format!("constant mobius {} {} {} {}\n", m.a, m.b, m.c, m.d));
        }
        Cocycle::Constant(FiberMap::Homeo(h)) => {
            out.push_str(&format!("constant homeo {}\n", h.len()));
            write_homeo(out, h);
        }
        Cocycle::Mobius(MobiusFamily::Herman { lambda }) => out.push_str(&format!("herman {lambda}\n")),
        Cocycle::Homeo { param, path } => {
            match param {
                ParamMap::Cosine => out.push_str("path-cocycle cosine\n"),
                ParamMap::Theta(t) => {
                    let p = t.params();
                    out.push_str(&format!("path-cocycle theta {} {} {}\n", p.alpha, p.n, p.gamma));
                }
            }
            out.push_str(&format!("path {}\n", path.knots().len()));
            for (t, h) in path.knots().iter().zip(path.anchors()) {
                out.push_str(&format!("anchor {t} {}\n", h.len()));
                write_homeo(out, h);
            }
        }
        Cocycle::Coboundary(h) => {
            out.push_str("coboundary\n");
            write_cocycle(out, h);
        }
    }
}

pub fn serialize_cocycle(c: &Cocycle) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    write_cocycle(&mut out, c);
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn next_tokens(&mut self) -> Result<Vec<&'a str>> {
        for (i, line) in self.it.by_ref() {
            self.line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Ok(line.split_whitespace().collect());
        }
        Err(Error::parse("cocycle", "unexpected end of input"))
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::parse("cocycle", format!("line {}: {msg}", self.line_no))
    }

    fn real(&self, tok: Option<&&str>) -> Result<f64> {
        let tok = tok.ok_or_else(|| self.err("missing number"))?;
        let v: f64 = tok.parse().map_err(|_| self.err(format!("bad number {tok:?}")))?;
        if !v.is_finite() {
            return Err(self.err(format!("non-finite number {tok:?}")));
        }
        Ok(v)
    }

    fn count(&self, tok: Option<&&str>) -> Result<usize> {
        let tok = tok.ok_or_else(|| self.err("missing count"))?;
        let n: usize = tok.parse().map_err(|_| self.err(format!("bad count {tok:?}")))?;
        if n > MAX_COUNT {
            return Err(self.err(format!("count {n} too large")));
        }
        Ok(n)
    }

    fn homeo(&mut self, m: usize) -> Result<CircleHomeo> {
        let mut xs = Vec::with_capacity(m);
        let mut ys = Vec::with_capacity(m);
        for _ in 0..m {
            let t = self.next_tokens()?;
            if t.len() != 3 || t[0] != "bp" {
                return Err(self.err("expected `bp <x> <y>`"));
            }
            xs.push(self.real(t.get(1))?);
            ys.push(self.real(t.get(2))?);
        }
        CircleHomeo::new(xs, ys).map_err(|e| self.err(e))
    }

    fn path(&mut self) -> Result<HomeoPath> {
        let t = self.next_tokens()?;
        if t.len() != 2 || t[0] != "path" {
            return Err(self.err("expected `path <k>`"));
        }
        let k = self.count(t.get(1))?;
        let mut knots = Vec::with_capacity(k);
        let mut homeos = Vec::with_capacity(k);
        for _ in 0..k {
            let t = self.next_tokens()?;
            if t.len() != 3 || t[0] != "anchor" {
                return Err(self.err("expected `anchor <t> <m>`"));
            }
            knots.push(self.real(t.get(1))?);
            let m = self.count(t.get(2))?;
            homeos.push(self.homeo(m)?);
        }
        HomeoPath::new(knots, homeos).map_err(|e| self.err(e))
    }

    fn cocycle(&mut self, depth: usize) -> Result<Cocycle> {
        if depth > MAX_DEPTH {
            return Err(self.err("cocycle nesting too deep"));
        }
        let t = self.next_tokens()?;
        match t.as_slice() {
            ["constant", "mobius", ..] if t.len() == 6 => {
                let v: Vec<f64> = t[2..].iter().map(|s| self.real(Some(s))).collect::<Result<_>>()?;
                Ok(Cocycle::Constant(FiberMap::Mobius(Mat2::new(v[0], v[1], v[2], v[3]))))
            }
            ["constant", "homeo", m] => {
                let m = self.count(Some(m))?;
                Ok(Cocycle::Constant(FiberMap::Homeo(self.homeo(m)?)))
            }
            ["herman", l] => {
                let lambda = self.real(Some(l))?;
                if lambda <= 0.0 {
                    return Err(self.err("herman lambda must be positive"));
                }
                Ok(Cocycle::herman(lambda))
            }
            ["path-cocycle", "cosine"] => {
                let path = self.path()?;
                Ok(Cocycle::Homeo { param: ParamMap::Cosine, path: Arc::new(path) })
            }
            ["path-cocycle", "theta", alpha, n, gamma] => {
                let n: u64 = n.parse().map_err(|_| self.err(format!("bad N {n:?}")))?;
                let gamma = self.real(Some(gamma))?;
                let params = ThetaParams { alpha: alpha.to_string(), n, gamma };
                let path = self.path()?;
                let theta = ThetaMap::from_params(&params).map_err(|e| self.err(e))?;
                Ok(Cocycle::Homeo { param: ParamMap::Theta(Arc::new(theta)), path: Arc::new(path) })
            }
            ["coboundary"] => Ok(Cocycle::coboundary_of(self.cocycle(depth + 1)?)),
            _ => Err(self.err(format!("unknown cocycle record {:?}", t.join(" ")))),
        }
    }
}

pub fn parse_cocycle(text: &str) -> Result<Cocycle> {
    let mut lines = Lines { it: text.lines().enumerate(), line_no: 0 };
    let head = lines.next_tokens()?;
    if head.join(" ") != HEADER {
        return Err(lines.err(format!("expected header {HEADER:?}")));
    }
    let c = lines.cocycle(0)?;
    let tail = lines.next_tokens()?;
    if tail != ["end"] {
        return Err(lines.err("expected `end`"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = CircleHomeo::new(vec![0.0, 0.1 + 0.2, 1.0], vec![-0.7, 0.123456789012345, 0.3]).unwrap();
        let path = HomeoPath::new(vec![0.0, 1.0 / 3.0, 1.0], vec![g.clone(), CircleHomeo::rotation(0.1), g]).unwrap();
        let cases = vec![
            Cocycle::constant_matrix(Mat2::new(2.0, 0.1, 1.0 / 3.0, 0.6)),
            Cocycle::constant_rotation(std::f64::consts::FRAC_1_PI),
            Cocycle::herman(2.0),
            Cocycle::coboundary_of(Cocycle::Homeo { param: ParamMap::Cosine, path: Arc::new(path) }),
        ];
        for c in cases {
            let text = serialize_cocycle(&c);
            let back = parse_cocycle(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(serialize_cocycle(&back), text);
        }
    }

    #[test]
    fn malformed_input_is_rejected() {
        for bad in [
            "",
            "ergolab-cocycle 1\n",
            "ergolab-cocycle 1\nherman 2\n",
            "ergolab-cocycle 1\nherman x\nend\n",
            "ergolab-cocycle 1\nconstant homeo 2\nbp 0 0\nbp 1 3\nend\n",
            "ergolab-cocycle 1\nconstant homeo 99999999\nend\n",
            "ergolab-cocycle 2\nherman 2\nend\n",
        ] {
            assert!(parse_cocycle(bad).is_err(), "{bad:?}");
        }
        let deep = format!("ergolab-cocycle 1\n{}herman 2\nend\n", "coboundary\n".repeat(20));
        assert!(parse_cocycle(&deep).is_err());
    }
}
