//! A closed mini-language for candidate answers.
//!
//! Model answers are parsed into one of four forms (literal list, ordinal
//! indicator, closed form, recurrence), executed per term under a step
//! budget, and classified as print, ordinal, or neither. Executing a small
//! language of our own instead of model-emitted Python keeps evaluation
//! decidable and sandbox-free; the raw text is always recorded so other
//! executors can be plugged in behind [`CandidateRecord`].
//!
//! The grammar is documented in `docs/candidate-grammar.md`. Term indices
//! are 1-based (`n = 1..count`); indicator position sets are 0-based, so
//! `ones at {4}` puts the single 1 of a 7-term target at its fifth term.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Alphabet, SequenceItem};
use crate::error::CandidateError;
use crate::metrics::deflate_length;

/// Default per-term evaluation budget, counted in AST node visits.
pub const DEFAULT_STEP_BUDGET: u64 = 100_000;

/// Deepest prior-term reference a recurrence may use.
pub const MAX_RECURRENCE_LAG: u64 = 8;

/// Separator styles a sequence may be rendered with inside answer text.
/// Ordered longest first so fixpoint removal is deterministic.
pub const CANONICAL_SEPARATORS: [&str; 4] = [", ", ",", " ", ""];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    LiteralList,
    OrdinalIndicator,
    ClosedForm,
    Recurrence,
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Number(i64),
    Index,
    /// a(n - lag), lag in 1..=MAX_RECURRENCE_LAG
    Prior(u64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Mod(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Body {
    Literal(Vec<i64>),
    /// Sorted, deduplicated 0-based positions of ones.
    Indicator(Vec<u64>),
    Formula {
        base: BTreeMap<usize, i64>,
        general: Option<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiniProgram {
    pub form: Form,
    pub source: String,
    pub length_chars: usize,
    body: Body,
}

// ---------------------------------------------------------------------------
// Lexing and parsing.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Caret,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, CandidateError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '\u{00d7}' => Some(Tok::Star),
            '/' | '\u{00f7}' => Some(Tok::Slash),
            '%' => Some(Tok::Percent),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            out.push((at, tok));
        } else if c == '*' {
            chars.next();
            if chars.peek().is_some_and(|&(_, c2)| c2 == '*') {
                chars.next();
                out.push((at, Tok::Caret));
            } else {
                out.push((at, Tok::Star));
            }
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            let value = digits.parse::<i64>().map_err(|_| CandidateError::Parse {
                at,
                msg: format!("integer literal {digits} is too large"),
            })?;
            out.push((at, Tok::Int(value)));
        } else if c.is_alphabetic() {
            let mut word = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    word.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((at, Tok::Ident(word.to_ascii_lowercase())));
        } else if c.is_whitespace() {
            chars.next();
        } else {
            return Err(CandidateError::Parse {
                at,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(at, _)| at)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, CandidateError> {
        Err(CandidateError::Parse { at: self.at(), msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), CandidateError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == word)
    }

    /// Signed integer list, at least one element.
    fn int_list(&mut self) -> Result<Vec<i64>, CandidateError> {
        let mut values = Vec::new();
        loop {
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Int(v)) => values.push(if negative { -v } else { v }),
                _ => return self.fail("expected an integer"),
            }
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(values);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, CandidateError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CandidateError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => Expr::Mul as fn(_, _) -> _,
                Some(Tok::Slash) => Expr::Div,
                Some(Tok::Percent) => Expr::Mod,
                Some(Tok::Ident(w)) if w == "mod" => Expr::Mod,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = op(Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr, CandidateError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, CandidateError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            // right-associative: 2^3^2 = 2^(3^2)
            Ok(Expr::Pow(Box::new(base), Box::new(self.factor()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, CandidateError> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Expr::Number(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some(Tok::Ident(w)) if w == "n" => Ok(Expr::Index),
            Some(Tok::Ident(w)) if w == "a" => {
                self.expect(Tok::LParen, "( after a")?;
                if !self.is_ident("n") {
                    return self.fail("prior-term references must have the shape a(n-k)");
                }
                self.pos += 1;
                self.expect(Tok::Minus, "- in a(n-k)")?;
                let lag = match self.bump() {
                    Some(Tok::Int(v)) if v >= 1 => v as u64,
                    _ => return self.fail("lag must be a positive integer"),
                };
                if lag > MAX_RECURRENCE_LAG {
                    return Err(CandidateError::LagTooDeep(lag));
                }
                self.expect(Tok::RParen, ") after a(n-k)")?;
                Ok(Expr::Prior(lag))
            }
            _ => self.fail("expected an integer, n, a(n-k), or a parenthesised expression"),
        }
    }
}

fn max_lag(e: &Expr) -> u64 {
    match e {
        Expr::Number(_) | Expr::Index => 0,
        Expr::Prior(lag) => *lag,
        Expr::Neg(x) => max_lag(x),
        Expr::Add(l, r)
        | Expr::Sub(l, r)
        | Expr::Mul(l, r)
        | Expr::Div(l, r)
        | Expr::Mod(l, r)
        | Expr::Pow(l, r) => max_lag(l).max(max_lag(r)),
    }
}

/// Parse answer text into a [`MiniProgram`].
///
/// Accepted shapes: `print(1,2,3)`, `[1,2,3]`, a bare integer list,
/// `ones at {0,4,7}`, and definitions like
/// `a(1)=1, a(2)=1, a(n)=a(n-1)+a(n-2)`.
pub fn parse_candidate(text: &str) -> Result<MiniProgram, CandidateError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, end: text.len() };
    if p.peek().is_none() {
        return p.fail("empty candidate");
    }

    let (form, body) = if p.is_ident("print") {
        p.pos += 1;
        p.expect(Tok::LParen, "( after print")?;
        // allow both print(1,2,3) and print([1,2,3])
        let bracketed = p.peek() == Some(&Tok::LBracket);
        if bracketed {
            p.pos += 1;
        }
        let values = p.int_list()?;
        if bracketed {
            p.expect(Tok::RBracket, "closing ]")?;
        }
        p.expect(Tok::RParen, "closing )")?;
        (Form::LiteralList, Body::Literal(values))
    } else if p.peek() == Some(&Tok::LBracket) {
        p.pos += 1;
        let values = p.int_list()?;
        p.expect(Tok::RBracket, "closing ]")?;
        (Form::LiteralList, Body::Literal(values))
    } else if matches!(p.peek(), Some(Tok::Int(_) | Tok::Minus)) {
        (Form::LiteralList, Body::Literal(p.int_list()?))
    } else if p.is_ident("ones") {
        p.pos += 1;
        if !p.is_ident("at") {
            return p.fail("expected `at` after `ones`");
        }
        p.pos += 1;
        p.expect(Tok::LBrace, "{ before the index set")?;
        let raw = p.int_list()?;
        p.expect(Tok::RBrace, "} after the index set")?;
        let mut positions = Vec::with_capacity(raw.len());
        for v in raw {
            if v < 0 {
                return p.fail("indicator positions must be non-negative");
            }
            positions.push(v as u64);
        }
        positions.sort_unstable();
        positions.dedup();
        (Form::OrdinalIndicator, Body::Indicator(positions))
    } else if p.is_ident("a") {
        let mut base = BTreeMap::new();
        let mut general = None;
        loop {
            if !p.is_ident("a") {
                return p.fail("expected a rule of the form a(i)=... or a(n)=...");
            }
            p.pos += 1;
            p.expect(Tok::LParen, "( after a")?;
            let head = p.bump();
            p.expect(Tok::RParen, ") in the rule head")?;
            p.expect(Tok::Eq, "= in the rule")?;
            let rhs = p.expr()?;
            match head {
                Some(Tok::Ident(w)) if w == "n" => {
                    if general.replace(rhs).is_some() {
                        return p.fail("more than one general rule a(n)=...");
                    }
                }
                Some(Tok::Int(i)) => {
                    if i < 1 {
                        return Err(CandidateError::ZeroPosition);
                    }
                    if max_lag(&rhs) != 0 {
                        return p.fail("base cases must not reference prior terms");
                    }
                    base.insert(i as usize, const_eval(&rhs)?);
                }
                _ => return p.fail("rule head must be a(n) or a(<integer>)"),
            }
            match p.peek() {
                Some(Tok::Comma | Tok::Semi) => p.pos += 1,
                None => break,
                _ => return p.fail("expected , or ; between rules"),
            }
        }
        let form = match &general {
            Some(e) if max_lag(e) > 0 => Form::Recurrence,
            _ => Form::ClosedForm,
        };
        (form, Body::Formula { base, general })
    } else {
        return p.fail("unrecognised candidate shape");
    };

    if p.peek().is_some() {
        return p.fail("trailing input after a complete candidate");
    }
    Ok(MiniProgram {
        form,
        source: text.to_string(),
        length_chars: text.chars().count(),
        body,
    })
}

fn const_eval(e: &Expr) -> Result<i64, CandidateError> {
    let mut steps = DEFAULT_STEP_BUDGET;
    let v = eval(e, 1, &[], &mut steps, DEFAULT_STEP_BUDGET)?;
    i64::try_from(v).map_err(|_| CandidateError::Overflow)
}

// ---------------------------------------------------------------------------
// Execution.
// ---------------------------------------------------------------------------

fn eval(
    e: &Expr,
    n: usize,
    history: &[i64],
    steps: &mut u64,
    budget: u64,
) -> Result<i128, CandidateError> {
    if *steps == 0 {
        return Err(CandidateError::BudgetExceeded(budget));
    }
    *steps -= 1;
    let arith = |v: Option<i128>| v.ok_or(CandidateError::Overflow);
    match e {
        Expr::Number(v) => Ok(i128::from(*v)),
        Expr::Index => Ok(n as i128),
        Expr::Prior(lag) => {
            let lag = *lag as usize;
            if lag >= n {
                return Err(CandidateError::MissingBase(n as i64 - lag as i64));
            }
            Ok(i128::from(history[n - lag - 1]))
        }
        Expr::Neg(x) => arith(eval(x, n, history, steps, budget)?.checked_neg()),
        Expr::Add(l, r) => {
            let (l, r) = (eval(l, n, history, steps, budget)?, eval(r, n, history, steps, budget)?);
            arith(l.checked_add(r))
        }
        Expr::Sub(l, r) => {
            let (l, r) = (eval(l, n, history, steps, budget)?, eval(r, n, history, steps, budget)?);
            arith(l.checked_sub(r))
        }
        Expr::Mul(l, r) => {
            let (l, r) = (eval(l, n, history, steps, budget)?, eval(r, n, history, steps, budget)?);
            arith(l.checked_mul(r))
        }
        Expr::Div(l, r) => {
            let (l, r) = (eval(l, n, history, steps, budget)?, eval(r, n, history, steps, budget)?);
            if r == 0 {
                return Err(CandidateError::DivisionByZero);
            }
            arith(l.checked_div(r))
        }
        Expr::Mod(l, r) => {
            let (l, r) = (eval(l, n, history, steps, budget)?, eval(r, n, history, steps, budget)?);
            if r == 0 {
                return Err(CandidateError::DivisionByZero);
            }
            arith(l.checked_rem(r))
        }
        Expr::Pow(l, r) => {
            let (l, r) = (eval(l, n, history, steps, budget)?, eval(r, n, history, steps, budget)?);
            if r < 0 {
                return Err(CandidateError::NegativeExponent);
            }
            let exp = u32::try_from(r).map_err(|_| CandidateError::Overflow)?;
            arith(l.checked_pow(exp))
        }
    }
}

/// Run a program for terms `n = 1..=count`.
///
/// A literal list is its own output regardless of `count`; a list of the
/// wrong length can then never compare equal to the target. Formula terms
/// each get a fresh `budget` of AST node visits. Every term must fit in an
/// `i64` even though intermediates are evaluated in `i128`.
pub fn execute(
    p: &MiniProgram,
    count: usize,
    budget: u64,
) -> Result<Vec<i64>, CandidateError> {
    assert!(count >= 1, "term count must be at least 1");
    match &p.body {
        Body::Literal(values) => Ok(values.clone()),
        Body::Indicator(positions) => Ok((1..=count)
            .map(|term| i64::from(positions.binary_search(&(term as u64 - 1)).is_ok()))
            .collect()),
        Body::Formula { base, general } => {
            let mut history = Vec::with_capacity(count);
            for term in 1..=count {
                let value = match (base.get(&term), general) {
                    (Some(&v), _) => v,
                    (None, Some(e)) => {
                        let mut steps = budget;
                        let v = eval(e, term, &history, &mut steps, budget)?;
                        i64::try_from(v).map_err(|_| CandidateError::Overflow)?
                    }
                    (None, None) => return Err(CandidateError::MissingBase(term as i64)),
                };
                history.push(value);
            }
            Ok(history)
        }
    }
}

// ---------------------------------------------------------------------------
// Classification and text filters.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerKind {
    Print,
    Ordinal,
    NonBoth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub correct: bool,
    pub kind: AnswerKind,
    pub detail: String,
}

fn renderings(target: &SequenceItem) -> Vec<String> {
    let parts: Vec<String> = target.values.iter().map(|v| v.to_string()).collect();
    let mut out: Vec<String> = CANONICAL_SEPARATORS.iter().map(|sep| parts.join(sep)).collect();
    out.dedup();
    out
}

/// The separator under which the full target sequence appears in `text`,
/// if any. Separators are tried longest first.
fn embedded_rendering(text: &str, target: &SequenceItem) -> Option<&'static str> {
    let parts: Vec<String> = target.values.iter().map(|v| v.to_string()).collect();
    CANONICAL_SEPARATORS
        .iter()
        .find(|sep| text.contains(&parts.join(*sep)))
        .copied()
}

fn text_kind(source: &str, target: &SequenceItem) -> (AnswerKind, String) {
    match embedded_rendering(source, target) {
        Some(sep) => (
            AnswerKind::Print,
            format!("full target rendered with separator {sep:?} appears in the answer"),
        ),
        None => (AnswerKind::NonBoth, "no print or ordinal detector fired".into()),
    }
}

/// Classify an executed program against its target. Precedence is
/// print, then ordinal, then non-both; exactly one kind is assigned.
pub fn classify(p: &MiniProgram, output: &[i64], target: &SequenceItem) -> Classification {
    let correct = output == target.values;
    let (kind, detail) = if p.form == Form::LiteralList {
        (AnswerKind::Print, "literal-list form".to_string())
    } else if let Some(sep) = embedded_rendering(&p.source, target) {
        (
            AnswerKind::Print,
            format!("full target rendered with separator {sep:?} appears in the answer"),
        )
    } else if target.alphabet == Alphabet::Binary && p.form == Form::OrdinalIndicator {
        let ones: Vec<u64> = target
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(|(i, _)| i as u64)
            .collect();
        match &p.body {
            Body::Indicator(positions) if *positions == ones => (
                AnswerKind::Ordinal,
                "index set matches the positions of ones".to_string(),
            ),
            _ => (
                AnswerKind::NonBoth,
                "indicator set does not match the positions of ones".to_string(),
            ),
        }
    } else {
        (AnswerKind::NonBoth, "no print or ordinal detector fired".to_string())
    };
    Classification { correct, kind, detail }
}

/// Remove every rendering of the full target sequence from the text,
/// repeating until no rendering remains, so the result is a fixpoint
/// (normalising twice changes nothing).
pub fn normalize(answer_text: &str, target: &SequenceItem) -> String {
    let renderings = renderings(target);
    let mut text = answer_text.to_string();
    loop {
        let mut changed = false;
        for r in &renderings {
            if !r.is_empty() && text.contains(r.as_str()) {
                text = text.replace(r.as_str(), "");
                changed = true;
            }
        }
        if !changed {
            return text;
        }
    }
}

/// 100 x LCS(integer literals of the answer in textual order, target) /
/// |target|. Literals are maximal decimal digit runs; signs are ignored.
pub fn no_compression_percent(answer_text: &str, target: &SequenceItem) -> f64 {
    assert!(!target.values.is_empty(), "target must be non-empty");
    let mut literals = Vec::new();
    let mut run = String::new();
    for c in answer_text.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_digit() {
            run.push(c);
        } else if !run.is_empty() {
            literals.push(run.parse::<i64>().unwrap_or(i64::MAX));
            run.clear();
        }
    }
    let lcs = lcs_len(&literals, &target.values);
    100.0 * lcs as f64 / target.values.len() as f64
}

fn lcs_len(a: &[i64], b: &[i64]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &x in a {
        for (j, &y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

// ---------------------------------------------------------------------------
// End-to-end evaluation records.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxMetrics {
    pub length_chars: usize,
    pub normalized_length: usize,
    pub deflate_length: usize,
    pub no_compression_percent: f64,
}

/// Everything recorded about one answer to one item, in the shape written
/// to candidate record files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub model_id: String,
    pub item_id: String,
    pub raw_text: String,
    pub parsed_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<Vec<i64>>,
    pub classification: Classification,
    pub aux: AuxMetrics,
}

/// The per-answer row consumed by scoring: correctness bit, answer
/// complexity under the configured metric, and the auxiliary vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub item_id: String,
    pub model_id: String,
    pub c: bool,
    pub complexity_of_answer: f64,
    pub kind: AnswerKind,
    pub aux: AuxMetrics,
}

impl EvaluationRecord {
    pub fn validate(&self) -> Result<(), crate::error::ScoringError> {
        let finite_nonneg = self.complexity_of_answer.is_finite()
            && self.complexity_of_answer >= 0.0
            && self.aux.no_compression_percent.is_finite()
            && (0.0..=100.0).contains(&self.aux.no_compression_percent);
        if finite_nonneg {
            Ok(())
        } else {
            Err(crate::error::ScoringError::BadRecord(format!(
                "record for {} by {} has a non-finite or out-of-range field",
                self.item_id, self.model_id
            )))
        }
    }
}

/// Parse, execute, and classify one answer. Parse and execution failures
/// yield an incorrect record (the kind still reflects text-level print
/// detection, so incorrect prints remain filterable).
pub fn evaluate_candidate(
    raw_text: &str,
    target: &SequenceItem,
    model_id: &str,
    budget: u64,
) -> CandidateRecord {
    let aux = AuxMetrics {
        length_chars: raw_text.chars().count(),
        normalized_length: normalize(raw_text, target).chars().count(),
        deflate_length: deflate_length(raw_text),
        no_compression_percent: no_compression_percent(raw_text, target),
    };
    let (parsed_ok, output, classification) = match parse_candidate(raw_text) {
        Ok(program) => match execute(&program, target.values.len(), budget) {
            Ok(out) => {
                let classification = classify(&program, &out, target);
                (true, Some(out), classification)
            }
            Err(e) => {
                let (kind, _) = text_kind(raw_text, target);
                (
                    true,
                    None,
                    Classification {
                        correct: false,
                        kind,
                        detail: format!("execution failure: {e}"),
                    },
                )
            }
        },
        Err(e) => {
            let (kind, _) = text_kind(raw_text, target);
            (
                false,
                None,
                Classification {
                    correct: false,
                    kind,
                    detail: format!("unparseable: {e}"),
                },
            )
        }
    };
    CandidateRecord {
        model_id: model_id.to_string(),
        item_id: target.id.clone(),
        raw_text: raw_text.to_string(),
        parsed_ok,
        output,
        classification,
        aux,
    }
}
