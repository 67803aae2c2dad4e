//! The dictionary of test functions on `Z x Y x Y`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::Observation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Z,
    Y1,
    Y2,
    /// `y1 - y2`.
    Diff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wave {
    Cos,
    Sin,
}

pub type CustomFn = Arc<dyn Fn(&Observation) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum TestFunction {
    Const(f64),
    /// `cos(2 pi k c)` or `sin(2 pi k c)` of one coordinate.
    Trig { coord: Coord, wave: Wave, k: i32 },
    /// `(1 + cos 2 pi (y1 - y2)) / 2`, which is 1 on the diagonal.
    DiagCos,
    Custom { id: String, f: CustomFn, depends_on_z: bool },
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TestFunction({})", self.id())
    }
}

fn coord_name(c: Coord) -> &'static str {
    match c {
        Coord::Z => "z",
        Coord::Y1 => "y1",
        Coord::Y2 => "y2",
        Coord::Diff => "y1-y2",
    }
}

impl TestFunction {
    pub fn cos(coord: Coord, k: i32) -> Self {
        TestFunction::Trig { coord, wave: Wave::Cos, k }
    }

    pub fn sin(coord: Coord, k: i32) -> Self {
        TestFunction::Trig { coord, wave: Wave::Sin, k }
    }

    /// Stable identifier; [`TestFunction::parse`] reads it back.
    pub fn id(&self) -> String {
        match self {
            TestFunction::Const(c) => format!("const:{c}"),
            TestFunction::Trig { coord, wave, k } => {
                let w = match wave {
                    Wave::Cos => "cos",
                    Wave::Sin => "sin",
                };
                if *k == 1 {
                    format!("{w}:{}", coord_name(*coord))
                } else {
                    format!("{w}{k}:{}", coord_name(*coord))
                }
            }
            TestFunction::DiagCos => "diag-cos".into(),
            TestFunction::Custom { id, .. } => id.clone(),
        }
    }

    /// Parses `const:<c>`, `diag-cos`, or `<cos|sin>[k]:<z|y|y1|y2|y1-y2>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "diag-cos" {
            return Ok(TestFunction::DiagCos);
        }
        let (head, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::parse("test function", format!("unknown function {s:?}")))?;
        if head == "const" {
            let c: f64 = arg.parse().map_err(|_| Error::parse("test function", format!("bad constant {arg:?}")))?;
            if !c.is_finite() {
                return Err(Error::parse("test function", "constant must be finite"));
            }
            return Ok(TestFunction::Const(c));
        }
        let (wave, rest) = if let Some(r) = head.strip_prefix("cos") {
            (Wave::Cos, r)
        } else if let Some(r) = head.strip_prefix("sin") {
            (Wave::Sin, r)
        } else {
            return Err(Error::parse("test function", format!("unknown function {s:?}")));
        };
        let k: i32 = if rest.is_empty() {
            1
        } else {
            rest.parse().map_err(|_| Error::parse("test function", format!("bad frequency {rest:?}")))?
        };
        if k == 0 || k.unsigned_abs() > 1 << 20 {
            return Err(Error::parse("test function", format!("frequency {k} out of range")));
        }
        let coord = match arg {
            "z" => Coord::Z,
            "y" | "y1" => Coord::Y1,
            "y2" => Coord::Y2,
            "y1-y2" => Coord::Diff,
            _ => return Err(Error::parse("test function", format!("unknown coordinate {arg:?}"))),
        };
        Ok(TestFunction::Trig { coord, wave, k })
    }

    pub fn eval(&self, o: &Observation) -> f64 {
        match self {
            TestFunction::Const(c) => *c,
            TestFunction::Trig { coord, wave, k } => {
                let x = match coord {
                    Coord::Z => o.z,
                    Coord::Y1 => o.y1,
                    Coord::Y2 => o.y2,
                    Coord::Diff => o.y1 - o.y2,
                };
                let a = 2.0 * PI * f64::from(*k) * x;
                match wave {
                    Wave::Cos => a.cos(),
                    Wave::Sin => a.sin(),
                }
            }
            TestFunction::DiagCos => 0.5 * (1.0 + (2.0 * PI * (o.y1 - o.y2)).cos()),
            TestFunction::Custom { f, .. } => f(o),
        }
    }

    pub fn depends_on_z(&self) -> bool {
        match self {
            TestFunction::Const(_) | TestFunction::DiagCos => false,
            TestFunction::Trig { coord, .. } => *coord == Coord::Z,
            TestFunction::Custom { depends_on_z, .. } => *depends_on_z,
        }
    }

    pub fn depends_on_fiber(&self) -> bool {
        match self {
            TestFunction::Const(_) => false,
            TestFunction::Trig { coord, .. } => *coord != Coord::Z,
            TestFunction::DiagCos | TestFunction::Custom { .. } => true,
        }
    }

    /// Whether the function separates the diagonal `y1 = y2` from the rest.
    pub fn separates_diagonal(&self) -> bool {
        matches!(self, TestFunction::DiagCos | TestFunction::Trig { coord: Coord::Diff, .. })
    }

    /// Bound on `|f|`, used for boundary-term estimates.
    pub fn sup_norm(&self) -> Option<f64> {
        match self {
            TestFunction::Const(c) => Some(c.abs()),
            TestFunction::Trig { .. } | TestFunction::DiagCos => Some(1.0),
            TestFunction::Custom { .. } => None,
        }
    }
}

/// Trigonometric functions in every coordinate plus the diagonal cosine.
pub fn default_dictionary() -> Vec<TestFunction> {
    vec![
        TestFunction::cos(Coord::Z, 1),
        TestFunction::sin(Coord::Z, 1),
        TestFunction::cos(Coord::Y1, 1),
        TestFunction::sin(Coord::Y1, 1),
        TestFunction::cos(Coord::Y2, 1),
        TestFunction::cos(Coord::Diff, 1),
        TestFunction::sin(Coord::Diff, 1),
        TestFunction::DiagCos,
    ]
}

pub fn parse_dictionary(s: &str) -> Result<Vec<TestFunction>> {
    let v: Vec<TestFunction> =
        s.split(',').filter(|t| !t.trim().is_empty()).map(TestFunction::parse).collect::<Result<_>>()?;
    if v.is_empty() {
        return Err(Error::invalid("empty function dictionary"));
    }
    Ok(v)
}
