//! Text and JSON forms of [`MultiPoly`].
//!
//! Text grammar: terms joined by `+`/`-`; a term is `coeff * X1^e1 * ... * Xn^en`
//! where `coeff` is a decimal, a rational `p/q` or a complex `(a/b, c/d)` and may
//! be omitted. Exponents may be negative in Laurent mode (`X1^-2` or `X1^(-2)`).

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::is_negative_real;
use super::{format_rational, parse_rational, CoeffKind, Coefficient, Mode, MultiPoly};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number_literal(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while let Some(&c) = self.src.get(self.pos) {
            let exp_sign = (c == b'-' || c == b'+')
                && matches!(self.src.get(self.pos.wrapping_sub(1)), Some(b'e') | Some(b'E'));
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let num = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut text = num.to_string();
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            self.skip_ws();
            let dstart = self.pos;
            while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            text.push('/');
            text.push_str(std::str::from_utf8(&self.src[dstart..self.pos]).unwrap());
        }
        match parse_rational(&text) {
            Some(r) => Ok(r),
            None => {
                self.pos = start;
                self.err(format!("invalid number '{text}'"))
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let paren = self.eat(b'(');
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value = match text.parse::<i64>() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.err("expected integer exponent");
            }
        };
        if paren && !self.eat(b')') {
            return self.err("expected ')'");
        }
        Ok(value)
    }

    fn coefficient(&mut self) -> Result<Complex<BigRational>> {
        if self.eat(b'(') {
            let re = self.number_literal()?;
            if !self.eat(b',') {
                return self.err("expected ',' in complex coefficient");
            }
            let im = self.number_literal()?;
            if !self.eat(b')') {
                return self.err("expected ')' closing complex coefficient");
            }
            Ok(Complex::new(re, im))
        } else {
            Ok(Complex::new(self.number_literal()?, BigRational::zero()))
        }
    }

    fn variable(&mut self, exp: &mut [i64]) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.src.get(self.pos), Some(b'X') | Some(b'x')) {
            return self.err("expected variable X<i>");
        }
        self.pos += 1;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let idx: usize = match std::str::from_utf8(&self.src[start + 1..self.pos])
            .unwrap()
            .parse()
        {
            Ok(i) => i,
            Err(_) => {
                self.pos = start;
                return self.err("variable needs an index, e.g. X1");
            }
        };
        if idx == 0 || idx > self.nvars {
            self.pos = start;
            return self.err(format!("variable X{idx} out of range 1..={}", self.nvars));
        }
        let e = if self.eat(b'^') { self.integer()? } else { 1 };
        exp[idx - 1] = exp[idx - 1].checked_add(e).ok_or(Error::ExponentOverflow)?;
        Ok(())
    }

    fn term(&mut self) -> Result<(Vec<i64>, Complex<BigRational>)> {
        let mut exp = vec![0i64; self.nvars];
        let mut coeff = Complex::new(BigRational::one(), BigRational::zero());
        let mut first = true;
        loop {
            match self.peek() {
                Some(b'X') | Some(b'x') => self.variable(&mut exp)?,
                Some(c) if c == b'(' || c == b'.' || c.is_ascii_digit() => {
                    coeff *= self.coefficient()?;
                }
                _ => {
                    return if first {
                        self.err("expected a term")
                    } else {
                        self.err("expected a factor after '*'")
                    }
                }
            }
            first = false;
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((exp, coeff))
    }
}

/// Parses the text form.
pub fn parse(text: &str, nvars: usize, mode: Mode) -> Result<MultiPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    let mut terms = Vec::new();
    let mut sign = 1i64;
    if p.eat(b'-') {
        sign = -1;
    } else {
        p.eat(b'+');
    }
    loop {
        let (exp, c) = p.term()?;
        if mode == Mode::Ordinary {
            if let Some(&e) = exp.iter().find(|&&e| e < 0) {
                return Err(Error::NegativeExponent { exponent: e });
            }
        }
        let c = if sign < 0 { -c } else { c };
        terms.push((exp, Coefficient::Exact(c)));
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                sign = 1;
            }
            Some(b'-') => {
                p.pos += 1;
                sign = -1;
            }
            Some(_) => return p.err("expected '+', '-' or end of input"),
        }
    }
    MultiPoly::from_terms(nvars, mode, terms)
}

fn monomial_text(exp: &[i64]) -> String {
    exp.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("X{}", i + 1)
            } else {
                format!("X{}^{}", i + 1, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Serializes in descending graded-lex order.
pub fn serialize(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let negative = is_negative_real(c);
        let magnitude = if negative { c.neg() } else { c.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = monomial_text(&e.0);
        match (mono.is_empty(), magnitude.is_one()) {
            (true, _) => out.push_str(&magnitude.to_string()),
            (false, true) => out.push_str(&mono),
            (false, false) => {
                out.push_str(&magnitude.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeJson {
    Ordinary,
    Laurent,
}

impl From<Mode> for ModeJson {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Ordinary => ModeJson::Ordinary,
            Mode::Laurent => ModeJson::Laurent,
        }
    }
}

impl From<ModeJson> for Mode {
    fn from(m: ModeJson) -> Self {
        match m {
            ModeJson::Ordinary => Mode::Ordinary,
            ModeJson::Laurent => Mode::Laurent,
        }
    }
}

/// `{"nvars": n, "mode": "ordinary"|"laurent", "terms": [{"exp": [...], "re": "p/q", "im": "p/q"}]}`.
/// The optional `kind` field marks float coefficients (decimal strings).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub nvars: usize,
    pub mode: ModeJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &MultiPoly) -> Self {
        let float = p.kind() == CoeffKind::Float && !p.is_zero();
        PolyJson {
            nvars: p.nvars(),
            mode: p.mode().into(),
            kind: float.then(|| "float".to_string()),
            terms: p
                .terms()
                .rev()
                .map(|(e, c)| {
                    let (re, im) = match c {
                        Coefficient::Exact(c) => (format_rational(&c.re), format_rational(&c.im)),
                        Coefficient::Float(c) => (format!("{:?}", c.re), format!("{:?}", c.im)),
                    };
                    TermJson {
                        exp: e.0.clone(),
                        re,
                        im,
                    }
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MultiPoly> {
        let float = match self.kind.as_deref() {
            None | Some("exact") => false,
            Some("float") => true,
            Some(other) => return Err(Error::Input(format!("unknown coefficient kind '{other}'"))),
        };
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let coeff = if float {
                    let re: f64 = t.re.trim().parse().map_err(|_| bad_number(&t.re))?;
                    let im: f64 = t.im.trim().parse().map_err(|_| bad_number(&t.im))?;
                    Coefficient::Float(Complex64::new(re, im))
                } else {
                    let re = parse_rational(&t.re).ok_or_else(|| bad_number(&t.re))?;
                    let im = parse_rational(&t.im).ok_or_else(|| bad_number(&t.im))?;
                    Coefficient::Exact(Complex::new(re, im))
                };
                Ok((t.exp.clone(), coeff))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(self.nvars, self.mode.into(), terms)
    }
}

fn bad_number(s: &str) -> Error {
    Error::Input(format!("invalid coefficient '{s}'"))
}

pub fn to_json(p: &MultiPoly) -> String {
    serde_json::to_string(&PolyJson::from_poly(p)).expect("polynomial JSON serialization")
}

pub fn from_json(text: &str) -> Result<MultiPoly> {
    let pj: PolyJson = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    pj.to_poly()
}
