//! Literal grammar shared by spec files and flag values:
//!
//! * rationals `p/q`, circle points `p/q` or `surd(a,b,D,c)` for (a+b sqrt(D))/c
//! * groups `Z4` or `Z4 x Z8` (orders must already form a divisibility chain)
//! * sequences `geometric(1,2)`, `factorial(1)`, `recurrence([1,1],[0,1])`,
//!   `explicit([5,8,13])`, `finper(Z4, prefix=[], period=[2])`
//! * integer characters `zinf{1: 2, 5: -1}`, circle elements `tinf{3: 1/6}`
//!   or ruled tails `block(rule=harmonic, c=10, from=100)`
//!
//! Parsers report errors as byte offsets into the literal so the spec layer
//! can turn them into line/column diagnostics.

use charsub_core::circle::CirclePoint;
use charsub_core::finabel::{Character, FinAbGroup};
use charsub_core::seq::{FinPerSeq, SeqSpec};
use charsub_core::surd::QuadSurd;
use charsub_core::tinf::TInfElem;
use charsub_core::zinf::ZInfElem;
use charsub_core::Rat;
use num_bigint::BigInt;

pub struct LitError {
    pub offset: usize,
    pub msg: String,
}

type LResult<T> = Result<T, LitError>;

fn err<T>(offset: usize, msg: impl Into<String>) -> LResult<T> {
    Err(LitError { offset, msg: msg.into() })
}

/// Cursor over a literal string, tracking the byte offset for diagnostics.
struct Cur<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cur<'a> {
    fn new(s: &'a str) -> Cur<'a> {
        Cur { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> LResult<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            err(self.pos, format!("expected {:?}", c))
        }
    }

    fn try_eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> LResult<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        let end = self
            .rest()
            .char_indices()
            .find(|(_, c)| !c.is_ascii_alphanumeric() && *c != '_')
            .map(|(i, _)| start + i)
            .unwrap_or(self.s.len());
        if end == start {
            return err(start, "expected a name");
        }
        self.pos = end;
        Ok((&self.s[start..end], start))
    }

    fn integer(&mut self) -> LResult<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return err(start, "expected an integer");
        }
        self.pos = start + i;
        self.s[start..start + i]
            .parse::<BigInt>()
            .map_err(|e| LitError { offset: start, msg: e.to_string() })
    }

    fn i64_val(&mut self) -> LResult<i64> {
        self.skip_ws();
        let at = self.pos;
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| LitError { offset: at, msg: "value exceeds i64".into() })
    }

    fn u64_val(&mut self) -> LResult<u64> {
        self.skip_ws();
        let at = self.pos;
        let v = self.integer()?;
        u64::try_from(v)
            .map_err(|_| LitError { offset: at, msg: "expected a nonnegative integer".into() })
    }

    fn u128_val(&mut self) -> LResult<u128> {
        self.skip_ws();
        let at = self.pos;
        let v = self.integer()?;
        u128::try_from(v)
            .map_err(|_| LitError { offset: at, msg: "expected a nonnegative integer".into() })
    }

    fn rational(&mut self) -> LResult<Rat> {
        self.skip_ws();
        let at = self.pos;
        let p = self.integer()?;
        if self.try_eat('/') {
            let q = self.integer()?;
            if q == BigInt::from(0) {
                return err(at, "zero denominator");
            }
            Ok(Rat::new(p, q))
        } else {
            Ok(Rat::from_integer(p))
        }
    }

    fn end(&mut self) -> LResult<()> {
        self.skip_ws();
        if self.pos == self.s.len() {
            Ok(())
        } else {
            err(self.pos, "unexpected trailing input")
        }
    }
}

pub fn parse_rational(s: &str) -> LResult<Rat> {
    let mut c = Cur::new(s);
    let r = c.rational()?;
    c.end()?;
    Ok(r)
}

pub fn parse_u64(s: &str) -> LResult<u64> {
    let mut c = Cur::new(s);
    let v = c.u64_val()?;
    c.end()?;
    Ok(v)
}

fn point_inner(c: &mut Cur) -> LResult<CirclePoint> {
    c.skip_ws();
    let at = c.pos;
    if c.rest().starts_with("surd") {
        let _ = c.ident()?;
        c.eat('(')?;
        let a = c.rational()?;
        c.eat(',')?;
        let b = c.rational()?;
        c.eat(',')?;
        let d = c.integer()?;
        c.eat(',')?;
        let cc = c.rational()?;
        c.eat(')')?;
        // (a + b sqrt(d)) / cc with rational a, b, cc folded into the
        // canonical integer quadruple
        let denom = a.denom() * b.denom() * cc.denom();
        let scale = &denom / cc.denom() * cc.numer();
        if scale == BigInt::from(0) {
            return err(at, "surd denominator is zero");
        }
        let na = a.numer() * (&denom / a.denom());
        let nb = b.numer() * (&denom / b.denom());
        let surd = QuadSurd::new(na, nb, d, scale)
            .map_err(|e| LitError { offset: at, msg: e.to_string() })?;
        Ok(CirclePoint::from_surd(surd))
    } else {
        let r = c.rational()?;
        Ok(CirclePoint::from_rat(&r))
    }
}

pub fn parse_point(s: &str) -> LResult<CirclePoint> {
    let mut c = Cur::new(s);
    let p = point_inner(&mut c)?;
    c.end()?;
    Ok(p)
}

fn list<T>(c: &mut Cur, mut item: impl FnMut(&mut Cur) -> LResult<T>) -> LResult<Vec<T>> {
    c.eat('[')?;
    let mut out = Vec::new();
    if c.try_eat(']') {
        return Ok(out);
    }
    loop {
        out.push(item(c)?);
        if c.try_eat(']') {
            return Ok(out);
        }
        c.eat(',')?;
    }
}

pub fn parse_point_list(s: &str) -> LResult<Vec<CirclePoint>> {
    let mut c = Cur::new(s);
    let v = list(&mut c, point_inner)?;
    c.end()?;
    Ok(v)
}

pub fn parse_u64_list(s: &str) -> LResult<Vec<u64>> {
    let mut c = Cur::new(s);
    let v = list(&mut c, |c| c.u64_val())?;
    c.end()?;
    Ok(v)
}

pub fn parse_i64_list(s: &str) -> LResult<Vec<i64>> {
    let mut c = Cur::new(s);
    let v = list(&mut c, |c| c.i64_val())?;
    c.end()?;
    Ok(v)
}

fn group_inner(c: &mut Cur) -> LResult<FinAbGroup> {
    let mut orders = Vec::new();
    loop {
        c.skip_ws();
        let at = c.pos;
        let (name, _) = c.ident()?;
        if !(name.starts_with('Z') || name.starts_with('z')) || name.len() < 2 {
            return err(at, format!("expected a cyclic factor like Z4, found {:?}", name));
        }
        let m: i64 = name[1..]
            .parse()
            .map_err(|_| LitError { offset: at, msg: format!("bad cyclic order in {:?}", name) })?;
        if m < 1 {
            return err(at, "cyclic orders must be positive");
        }
        orders.push(m);
        c.skip_ws();
        if c.rest().starts_with('x') || c.rest().starts_with('X') {
            c.pos += 1;
            continue;
        }
        break;
    }
    let at = c.pos;
    let (group, map) = FinAbGroup::from_orders(&orders)
        .map_err(|e| LitError { offset: 0, msg: e.to_string() })?;
    // coordinates in spec files are read against the stated factors; only
    // identity canonicalization keeps them unambiguous
    let is_identity = orders.len() == group.rank()
        && map.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, &v)| v == if i == j { 1 } else { 0 })
        });
    if !is_identity {
        return err(
            at,
            format!(
                "orders {:?} are not a divisibility chain; state the invariant factors {:?} instead",
                orders,
                group.factors()
            ),
        );
    }
    Ok(group)
}

pub fn parse_group(s: &str) -> LResult<FinAbGroup> {
    let mut c = Cur::new(s);
    let g = group_inner(&mut c)?;
    c.end()?;
    Ok(g)
}

/// Character list over `g`: scalars for rank 1 (`[2, 0]` = two characters),
/// coordinate vectors otherwise (`[[2,0],[0,4]]`).
fn char_list(c: &mut Cur, g: &FinAbGroup) -> LResult<Vec<Character>> {
    let at = c.pos;
    let coords: Vec<(Vec<i64>, usize)> = list(c, |c| {
        c.skip_ws();
        let item_at = c.pos;
        if c.rest().starts_with('[') {
            Ok((list(c, |c| c.i64_val())?, item_at))
        } else {
            Ok((vec![c.i64_val()?], item_at))
        }
    })?;
    let mut out = Vec::new();
    for (v, item_at) in coords {
        if v.len() != g.rank() {
            return err(
                item_at.max(at),
                format!("character needs {} coordinates, found {}", g.rank(), v.len()),
            );
        }
        out.push(g.character(&v).map_err(|e| LitError { offset: item_at, msg: e.to_string() })?);
    }
    Ok(out)
}

pub fn parse_char_list(s: &str, g: &FinAbGroup) -> LResult<Vec<Character>> {
    let mut c = Cur::new(s);
    let v = char_list(&mut c, g)?;
    c.end()?;
    Ok(v)
}

/// Element coordinate list: same shape as characters.
pub fn parse_element_coords(s: &str, g: &FinAbGroup) -> LResult<Vec<i64>> {
    let mut c = Cur::new(s);
    let v = list(&mut c, |c| c.i64_val())?;
    c.end()?;
    if v.len() != g.rank() {
        return err(0, format!("element needs {} coordinates, found {}", g.rank(), v.len()));
    }
    Ok(v)
}

fn finper_inner(c: &mut Cur) -> LResult<FinPerSeq> {
    c.eat('(')?;
    let g = group_inner(c)?;
    let mut prefix = Vec::new();
    let mut period = None;
    while c.try_eat(',') {
        let (key, key_at) = c.ident()?;
        c.eat('=')?;
        match key {
            "prefix" => prefix = char_list(c, &g)?,
            "period" => period = Some(char_list(c, &g)?),
            other => return err(key_at, format!("unknown finper key {:?}", other)),
        }
    }
    c.eat(')')?;
    let period = match period {
        Some(p) if !p.is_empty() => p,
        _ => return err(0, "finper needs a nonempty period"),
    };
    FinPerSeq::new(g, prefix, period).map_err(|e| LitError { offset: 0, msg: e.to_string() })
}

pub fn parse_seqspec(s: &str) -> LResult<SeqSpec> {
    let mut c = Cur::new(s);
    let (head, at) = c.ident()?;
    let spec = match head {
        "geometric" => {
            c.eat('(')?;
            let a = c.i64_val()?;
            c.eat(',')?;
            let q = c.i64_val()?;
            c.eat(')')?;
            SeqSpec::geometric(a, q).map_err(|e| LitError { offset: at, msg: e.to_string() })?
        }
        "factorial" => {
            c.eat('(')?;
            let a = c.i64_val()?;
            c.eat(')')?;
            SeqSpec::factorial(a)
        }
        "recurrence" => {
            c.eat('(')?;
            let coeffs = list(&mut c, |c| c.integer())?;
            c.eat(',')?;
            let init = list(&mut c, |c| c.integer())?;
            c.eat(')')?;
            SeqSpec::recurrence(coeffs, init)
                .map_err(|e| LitError { offset: at, msg: e.to_string() })?
        }
        "explicit" => {
            c.eat('(')?;
            let terms = list(&mut c, |c| c.integer())?;
            c.eat(')')?;
            SeqSpec::explicit(terms)
        }
        "finper" => SeqSpec::FinPer(finper_inner(&mut c)?),
        other => return err(at, format!("unknown sequence family {:?}", other)),
    };
    c.end()?;
    Ok(spec)
}

pub fn parse_zinf(s: &str) -> LResult<ZInfElem> {
    let mut c = Cur::new(s);
    let (head, at) = c.ident()?;
    if head != "zinf" {
        return err(at, "expected zinf{...}");
    }
    c.eat('{')?;
    let mut entries = Vec::new();
    if !c.try_eat('}') {
        loop {
            let pos = c.u128_val()?;
            c.eat(':')?;
            let coef = c.integer()?;
            entries.push((pos, coef));
            if c.try_eat('}') {
                break;
            }
            c.eat(',')?;
        }
    }
    c.end()?;
    ZInfElem::from_entries(entries).map_err(|e| LitError { offset: at, msg: e.to_string() })
}

pub fn parse_tinf(s: &str) -> LResult<TInfElem> {
    let mut c = Cur::new(s);
    let (head, at) = c.ident()?;
    match head {
        "tinf" => {
            c.eat('{')?;
            let mut entries = Vec::new();
            if !c.try_eat('}') {
                loop {
                    let pos = c.u128_val()?;
                    c.eat(':')?;
                    let val = point_inner(&mut c)?;
                    entries.push((pos, val));
                    if c.try_eat('}') {
                        break;
                    }
                    c.eat(',')?;
                }
            }
            c.end()?;
            TInfElem::finite(entries).map_err(|e| LitError { offset: at, msg: e.to_string() })
        }
        "block" => {
            c.eat('(')?;
            let mut rule = None;
            let mut scale: u64 = 1;
            let mut from: u128 = 0;
            loop {
                let (key, key_at) = c.ident()?;
                match key {
                    "rule" => {
                        c.eat('=')?;
                        let (name, name_at) = c.ident()?;
                        if name != "harmonic" {
                            return err(name_at, format!("unknown tail rule {:?}", name));
                        }
                        rule = Some(name);
                    }
                    "c" | "C" => {
                        c.eat('=')?;
                        scale = c.u64_val()?;
                    }
                    "from" => {
                        c.eat('=')?;
                        from = c.u128_val()?;
                    }
                    other => return err(key_at, format!("unknown block key {:?}", other)),
                }
                if c.try_eat(')') {
                    break;
                }
                c.eat(',')?;
            }
            c.end()?;
            if rule.is_none() {
                return err(at, "block needs rule=harmonic");
            }
            TInfElem::dense_tail(Vec::new(), scale, from)
                .map_err(|e| LitError { offset: at, msg: e.to_string() })
        }
        other => err(at, format!("expected tinf{{...}} or block(...), found {:?}", other)),
    }
}

pub fn parse_bigint(s: &str) -> LResult<BigInt> {
    let mut c = Cur::new(s);
    let v = c.integer()?;
    c.end()?;
    Ok(v)
}

pub fn parse_u32(s: &str) -> LResult<u32> {
    let mut c = Cur::new(s);
    let at = c.pos;
    let v = c.u64_val()?;
    c.end()?;
    u32::try_from(v).map_err(|_| LitError { offset: at, msg: "value exceeds u32".into() })
}
