//! Text format for experiment definitions.
//!
//! ```text
//! # comment
//! experiment sim6
//! seed 7
//! subjects 32
//! trials 52
//! set_sizes 1, 2, 4, 8, 16
//! param delta 0.5
//! condition relation_only {
//!     target = above(red X, green O);
//!     distractor = above(green O, red X);
//!     salience shape 1.5;
//!     emergent 0.33;
//!     higher_order target arrow 64;
//!     param p_sample_relevant 0.95;
//! }
//! ```
//!
//! Top-level statements may end with an optional `;`. Statements inside a
//! condition must. `distractor` may repeat to declare several distractor
//! types. The `higher_order` scope (`target` or `distractor`) is optional;
//! without it the pattern is attached to every item.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiments::{
    ConditionSpec, ExperimentSpec, HigherOrderScope, HigherOrderSpec, ParamOverrides,
    SalienceOverride, SalienceTarget,
};
use crate::features::{Color, Shape};
use crate::stimuli::{Filler, ItemExpr, Relation};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '+')
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let (line, column) = (i + 1, j + 1);
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                j += 1;
            } else if "{}(),;=".contains(c) {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line,
                    column,
                });
                j += 1;
            } else if is_word_char(c) {
                let start = j;
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                out.push(Token {
                    tok: Tok::Word(chars[start..j].iter().collect()),
                    line,
                    column,
                });
            } else {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Word(w) => format!("`{w}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(tok: &Token, message: impl Into<String>) -> Error {
        Error::Parse {
            line: tok.line,
            column: tok.column,
            message: message.into(),
        }
    }

    /// Re-anchors a semantic error at a token.
    fn locate(tok: &Token, err: Error) -> Error {
        match err {
            e @ Error::Parse { .. } => e,
            other => Parser::error_at(tok, other.to_string()),
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            other => Err(Parser::error_at(
                &t,
                format!("expected {what}, found {}", describe(other)),
            )),
        }
    }

    fn sym(&mut self, c: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(Parser::error_at(
                &t,
                format!("expected `{c}`, found {}", describe(&t.tok)),
            ))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let (w, t) = self.word(what)?;
        w.parse()
            .map_err(|_| Parser::error_at(&t, format!("expected {what}, found `{w}`")))
    }

    fn filler(&mut self) -> Result<Filler> {
        let (c, ct) = self.word("a color")?;
        let color = c.parse().map_err(|e| Parser::locate(&ct, e))?;
        let (s, st) = self.word("a shape")?;
        let shape = s.parse().map_err(|e| Parser::locate(&st, e))?;
        Ok(Filler::new(color, shape))
    }

    fn item_expr(&mut self) -> Result<ItemExpr> {
        let first = self.peek().clone();
        if matches!(self.tokens.get(self.pos + 1), Some(Token { tok: Tok::Sym('('), .. })) {
            let (name, _) = self.word("a relation")?;
            let relation: Relation = name.parse().map_err(|e| Parser::locate(&first, e))?;
            self.sym('(')?;
            let mut args = vec![self.filler()?];
            while self.eat(',') {
                args.push(self.filler()?);
            }
            self.sym(')')?;
            let expr = ItemExpr::Relational { relation, args };
            expr.bindings().map_err(|e| Parser::locate(&first, e))?;
            Ok(expr)
        } else {
            Ok(ItemExpr::Simple(self.filler()?))
        }
    }

    fn param(&mut self, into: &mut ParamOverrides) -> Result<()> {
        let (key, kt) = self.word("a parameter name")?;
        let (value, _) = self.word("a parameter value")?;
        into.set(&key, &value).map_err(|e| Parser::locate(&kt, e))
    }

    fn condition(&mut self, keyword: &Token) -> Result<ConditionSpec> {
        let (name, _) = self.word("a condition name")?;
        self.sym('{')?;
        let mut target = None;
        // placeholder target, replaced once the body is read
        let mut cond = ConditionSpec::new(&name, ItemExpr::simple(Color::None, Shape::X), Vec::new());
        loop {
            let t = self.next();
            let kw = match &t.tok {
                Tok::Sym('}') => break,
                Tok::Word(w) => w.clone(),
                other => {
                    return Err(Parser::error_at(
                        &t,
                        format!("expected a condition statement, found {}", describe(other)),
                    ))
                }
            };
            match kw.as_str() {
                "target" => {
                    self.sym('=')?;
                    if target.is_some() {
                        return Err(Parser::error_at(&t, "duplicate `target`"));
                    }
                    target = Some(self.item_expr()?);
                }
                "distractor" => {
                    self.sym('=')?;
                    cond.distractors.push(self.item_expr()?);
                }
                "salience" => {
                    let (what, _) = self.word("a segment or dimension")?;
                    let target: SalienceTarget = what.parse()?;
                    let eta: f64 = self.number("a salience value")?;
                    if !(eta >= 0.0 && eta.is_finite()) {
                        return Err(Parser::error_at(&t, Error::InvalidSalience(eta).to_string()));
                    }
                    cond.salience.push(SalienceOverride { target, eta });
                }
                "emergent" => {
                    let eta: f64 = self.number("a salience value")?;
                    if !(eta >= 0.0 && eta.is_finite()) {
                        return Err(Parser::error_at(&t, Error::InvalidSalience(eta).to_string()));
                    }
                    if cond.emergent.replace(eta).is_some() {
                        return Err(Parser::error_at(&t, "duplicate `emergent`"));
                    }
                }
                "higher_order" => {
                    let (mut w, mut wt) = self.word("a higher-order kind")?;
                    let scope = match w.as_str() {
                        "target" => HigherOrderScope::Target,
                        "distractor" => HigherOrderScope::Distractor,
                        _ => HigherOrderScope::Both,
                    };
                    if scope != HigherOrderScope::Both {
                        (w, wt) = self.word("a higher-order kind")?;
                    }
                    let kind = w.parse().map_err(|e| Parser::locate(&wt, e))?;
                    let n: usize = self.number("a positive width")?;
                    if n == 0 {
                        return Err(Parser::error_at(&t, "higher-order width must be positive"));
                    }
                    cond.higher_order.push(HigherOrderSpec { scope, kind, n });
                }
                "param" => self.param(&mut cond.params)?,
                other => {
                    return Err(Parser::error_at(
                        &t,
                        format!("unknown condition statement `{other}`"),
                    ))
                }
            }
            self.sym(';')?;
        }
        cond.target = target.ok_or_else(|| {
            Parser::error_at(keyword, format!("condition `{name}` has no target"))
        })?;
        if cond.distractors.is_empty() {
            return Err(Parser::error_at(
                keyword,
                format!("condition `{name}` has no distractor"),
            ));
        }
        Ok(cond)
    }

    fn document(&mut self) -> Result<ExperimentSpec> {
        let mut name = None;
        let mut seed = None;
        let mut subjects = None;
        let mut trials = None;
        let mut set_sizes = None;
        let mut params = ParamOverrides::new();
        let mut conditions: Vec<ConditionSpec> = Vec::new();

        fn once<T>(slot: &mut Option<T>, value: T, t: &Token, kw: &str) -> Result<()> {
            if slot.replace(value).is_some() {
                return Err(Parser::error_at(t, format!("duplicate `{kw}`")));
            }
            Ok(())
        }

        loop {
            let t = self.next();
            let kw = match &t.tok {
                Tok::Eof => break,
                Tok::Sym(';') => continue,
                Tok::Word(w) => w.clone(),
                other => {
                    return Err(Parser::error_at(
                        &t,
                        format!("expected a statement, found {}", describe(other)),
                    ))
                }
            };
            match kw.as_str() {
                "experiment" => {
                    let (n, _) = self.word("an experiment name")?;
                    once(&mut name, n, &t, &kw)?;
                }
                "seed" => {
                    let v = self.number("a seed")?;
                    once(&mut seed, v, &t, &kw)?;
                }
                "subjects" => {
                    let v: usize = self.number("a subject count")?;
                    if v == 0 {
                        return Err(Parser::error_at(&t, "subjects must be at least 1"));
                    }
                    once(&mut subjects, v, &t, &kw)?;
                }
                "trials" => {
                    let v: usize = self.number("a trial count")?;
                    if v == 0 {
                        return Err(Parser::error_at(&t, "trials must be at least 1"));
                    }
                    once(&mut trials, v, &t, &kw)?;
                }
                "set_sizes" => {
                    let mut sizes = vec![self.number::<usize>("a set size")?];
                    while self.eat(',') {
                        sizes.push(self.number("a set size")?);
                    }
                    if sizes.contains(&0) {
                        return Err(Parser::error_at(&t, "set sizes must be at least 1"));
                    }
                    once(&mut set_sizes, sizes, &t, &kw)?;
                }
                "param" => self.param(&mut params)?,
                "condition" => {
                    let c = self.condition(&t)?;
                    if conditions.iter().any(|d| d.name == c.name) {
                        return Err(Parser::error_at(
                            &t,
                            format!("duplicate condition `{}`", c.name),
                        ));
                    }
                    conditions.push(c);
                }
                other => {
                    return Err(Parser::error_at(&t, format!("unknown statement `{other}`")))
                }
            }
        }

        let end = self.peek().clone();
        if conditions.is_empty() {
            return Err(Parser::error_at(&end, "experiment declares no conditions"));
        }
        let set_sizes =
            set_sizes.ok_or_else(|| Parser::error_at(&end, "missing `set_sizes`"))?;
        Ok(ExperimentSpec {
            name: name.unwrap_or_else(|| "experiment".into()),
            seed: seed.unwrap_or(0),
            n_subjects: subjects.unwrap_or(1),
            trials_per_cell: trials.unwrap_or(1),
            set_sizes,
            params,
            conditions,
        })
    }
}

/// Parses an experiment document. Errors carry the line and column of the
/// offending token.
pub fn parse_experiment(text: &str) -> Result<ExperimentSpec> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    parser.document()
}

/// Canonical text form: fixed statement order, one statement per line.
pub fn serialize_experiment(spec: &ExperimentSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "experiment {}", spec.name);
    let _ = writeln!(out, "seed {}", spec.seed);
    let _ = writeln!(out, "subjects {}", spec.n_subjects);
    let _ = writeln!(out, "trials {}", spec.trials_per_cell);
    let sizes: Vec<String> = spec.set_sizes.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "set_sizes {}", sizes.join(", "));
    for (k, v) in spec.params.iter() {
        let _ = writeln!(out, "param {k} {v}");
    }
    for c in &spec.conditions {
        let _ = writeln!(out, "\ncondition {} {{", c.name);
        let _ = writeln!(out, "    target = {};", c.target);
        for d in &c.distractors {
            let _ = writeln!(out, "    distractor = {d};");
        }
        if let Some(eta) = c.emergent {
            let _ = writeln!(out, "    emergent {eta};");
        }
        for h in &c.higher_order {
            let scope = match h.scope {
                HigherOrderScope::Both => "",
                HigherOrderScope::Target => "target ",
                HigherOrderScope::Distractor => "distractor ",
            };
            let _ = writeln!(out, "    higher_order {scope}{} {};", h.kind.name(), h.n);
        }
        for s in &c.salience {
            let _ = writeln!(out, "    salience {} {};", s.target, s.eta);
        }
        for (k, v) in c.params.iter() {
            let _ = writeln!(out, "    param {k} {v};");
        }
        out.push_str("}\n");
    }
    out
}
