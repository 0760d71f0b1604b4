use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::lexer::{tokenize, Tok, Token};
use super::{AlgebraSpans, ParseError, ProblemDoc, SourceMap, SourceSpan};
use crate::algebra::{
    default_algebra_name, default_summand_label, Algebra, AtomKind, Centralizer, MatrixSummand, SpecialAtom,
};
use crate::numbers::{fold_sqrt, radical_from_power, ExactScalar, NumError, QuadExt, RadicalReal, Rational};

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    field: Option<u64>,
}

type PResult<T> = Result<T, ParseError>;

fn push_matrix(alg: &mut Algebra, spans: &mut AlgebraSpans, span: SourceSpan, weights: Vec<(ExactScalar, SourceSpan)>) {
    let label = default_summand_label(alg.matrix_summands.len());
    spans.matrices.push(span);
    spans.weights.push(weights.iter().map(|w| w.1).collect());
    alg.matrix_summands.push(MatrixSummand::new(weights.into_iter().map(|w| w.0).collect(), label));
}

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, field: None })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(ParseError::new(format!("expected {wanted}, found {}", self.peek().describe()), self.span()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn at_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn expect_ident(&mut self, name: &str) -> PResult<()> {
        if self.at_ident(name) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{name}`"))
        }
    }

    fn num_err(&self, span: SourceSpan) -> impl Fn(NumError) -> ParseError {
        move |e| ParseError::new(e.to_string(), span)
    }

    pub(crate) fn problem(&mut self) -> PResult<(ProblemDoc, SourceMap)> {
        let mut metadata = BTreeMap::new();
        loop {
            if self.at_ident("field") {
                let span = self.bump().span;
                if self.field.is_some() {
                    return Err(ParseError::new("duplicate `field` header", span));
                }
                self.expect_ident("sqrt")?;
                self.expect(Tok::LParen)?;
                let (k, kspan) = self.small_int()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Semi)?;
                let (_, d) = fold_sqrt(k);
                if d < 2 {
                    return Err(ParseError::new(format!("sqrt({k}) is rational, not a quadratic field"), kspan));
                }
                self.field = Some(d);
            } else if self.at_ident("meta") {
                self.bump();
                let key_span = self.span();
                let Tok::Ident(key) = self.bump().tok else {
                    return Err(ParseError::new("expected a metadata key", key_span));
                };
                self.expect(Tok::Eq)?;
                let vspan = self.span();
                let Tok::Str(value) = self.bump().tok else {
                    return Err(ParseError::new("expected a quoted metadata value", vspan));
                };
                self.expect(Tok::Semi)?;
                if metadata.insert(key.clone(), value).is_some() {
                    return Err(ParseError::new(format!("duplicate metadata key `{key}`"), key_span));
                }
            } else {
                break;
            }
        }

        let start = self.span();
        let mut algebras = Vec::new();
        let mut spans = Vec::new();
        loop {
            let (a, s) = self.algebra(algebras.len())?;
            algebras.push(a);
            spans.push(s);
            if !self.eat(&Tok::Star) {
                break;
            }
        }
        if self.peek() != &Tok::Eof {
            return self.unexpected("`*` or end of input");
        }
        if algebras.len() < 2 {
            return Err(ParseError::new("a free product needs at least two algebras", start));
        }
        Ok((ProblemDoc { field_d: self.field, algebras, metadata }, SourceMap { algebras: spans }))
    }

    fn algebra(&mut self, index: usize) -> PResult<(Algebra, AlgebraSpans)> {
        let whole = self.span();
        let grouped = self.eat(&Tok::LParen);
        let mut alg = Algebra::new(default_algebra_name(index), vec![], vec![]);
        let mut spans = AlgebraSpans { whole, matrices: vec![], weights: vec![], atoms: vec![] };
        loop {
            self.term(&mut alg, &mut spans)?;
            if !self.eat(&Tok::Sum) {
                break;
            }
        }
        if grouped {
            self.expect(Tok::RParen)?;
        }
        Ok((alg, spans))
    }

    fn term(&mut self, alg: &mut Algebra, spans: &mut AlgebraSpans) -> PResult<()> {
        let span = self.span();
        let Tok::Ident(head) = self.peek().clone() else {
            return self.unexpected("a summand (`C`, `M<n>`, `BH`, `III`, `HYP` or `LF`)");
        };
        self.bump();
        match head.as_str() {
            "C" => {
                self.expect(Tok::Colon)?;
                let w = self.scalar()?;
                push_matrix(alg, spans, span, vec![w]);
            }
            m if m.starts_with('M') && m.len() > 1 && m[1..].bytes().all(|b| b.is_ascii_digit()) => {
                let n: usize = m[1..].parse().map_err(|_| ParseError::new("matrix size too large", span))?;
                if n == 0 {
                    return Err(ParseError::new("matrix size must be positive", span));
                }
                self.expect(Tok::Colon)?;
                self.expect(Tok::LBrack)?;
                let mut ws = vec![self.scalar()?];
                while self.eat(&Tok::Comma) {
                    ws.push(self.scalar()?);
                }
                self.expect(Tok::RBrack)?;
                if ws.len() != n {
                    return Err(ParseError::new(format!("M{n} needs {n} weights, got {}", ws.len()), span));
                }
                push_matrix(alg, spans, span, ws);
            }
            "BH" => {
                self.expect(Tok::Colon)?;
                self.expect_ident("geom")?;
                self.expect(Tok::LParen)?;
                let (mass, _) = self.scalar()?;
                self.expect(Tok::Comma)?;
                let ratio = self.rational()?;
                self.expect(Tok::RParen)?;
                let atom = SpecialAtom::bh_geometric(mass, ratio).map_err(self.num_err(span))?;
                spans.atoms.push(span);
                alg.atoms.push(atom);
            }
            "III" => {
                self.expect(Tok::LParen)?;
                let mut gens = vec![self.radical()?];
                while self.eat(&Tok::Comma) {
                    gens.push(self.radical()?);
                }
                self.expect(Tok::Semi)?;
                let centralizer = if self.at_ident("R") {
                    Centralizer::HyperfiniteR
                } else if self.at_ident("LFinf") {
                    Centralizer::LFreeInfinity
                } else {
                    return self.unexpected("`R` or `LFinf`");
                };
                self.bump();
                self.expect(Tok::RParen)?;
                self.expect(Tok::Colon)?;
                let (mass, _) = self.scalar()?;
                spans.atoms.push(span);
                alg.atoms.push(SpecialAtom { kind: AtomKind::TypeIII { sd_generators: gens, centralizer }, mass });
            }
            "HYP" => {
                self.expect(Tok::Colon)?;
                let (mass, _) = self.scalar()?;
                spans.atoms.push(span);
                alg.atoms.push(SpecialAtom { kind: AtomKind::DiffuseTracial, mass });
            }
            "LF" => {
                self.expect(Tok::LParen)?;
                let param = if self.peek() == &Tok::RParen { None } else { Some(self.rational()?) };
                self.expect(Tok::RParen)?;
                self.expect(Tok::Colon)?;
                let (mass, _) = self.scalar()?;
                spans.atoms.push(span);
                alg.atoms.push(SpecialAtom { kind: AtomKind::FreeGroupFactor { param }, mass });
            }
            other => return Err(ParseError::new(format!("unknown summand kind `{other}`"), span)),
        }
        Ok(())
    }

    fn int(&mut self) -> PResult<(BigInt, SourceSpan)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok((s.parse().expect("digits"), span))
            }
            _ => self.unexpected("a number"),
        }
    }

    fn small_int(&mut self) -> PResult<(u64, SourceSpan)> {
        let (n, span) = self.int()?;
        let n = u64::try_from(n).map_err(|_| ParseError::new("number too large", span))?;
        Ok((n, span))
    }

    /// `p` or `p/q`, non-negative.
    fn rational(&mut self) -> PResult<Rational> {
        let (n, span) = self.int()?;
        let d = if self.eat(&Tok::Slash) { self.int()?.0 } else { BigInt::from(1) };
        Rational::try_new(n, d).map_err(self.num_err(span))
    }

    fn signed_rational(&mut self) -> PResult<Rational> {
        let neg = self.eat(&Tok::Minus);
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    /// `sqrt(k)` as a scalar, checked against the declared field.
    fn sqrt(&mut self) -> PResult<ExactScalar> {
        let span = self.span();
        self.expect_ident("sqrt")?;
        self.expect(Tok::LParen)?;
        let (k, _) = self.small_int()?;
        self.expect(Tok::RParen)?;
        let Some(q) = QuadExt::from_sqrt(Rational::one(), k) else {
            return Ok(ExactScalar::Rational(Rational::from_integer(fold_sqrt(k).0)));
        };
        match self.field {
            None => Err(ParseError::new(format!("sqrt({k}) used without a `field sqrt(d);` header"), span)),
            Some(d) if d != q.d() => {
                Err(ParseError::new(format!("sqrt({k}) is outside the declared field sqrt({d})"), span))
            }
            Some(_) => Ok(ExactScalar::from_quad(q)),
        }
    }

    /// Weights and masses: signed sums of `r`, `r*sqrt(k)` and `sqrt(k)`,
    /// or any arithmetic expression in parentheses.
    pub(crate) fn scalar(&mut self) -> PResult<(ExactScalar, SourceSpan)> {
        let span = self.span();
        if self.eat(&Tok::LParen) {
            let v = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok((v, span));
        }
        let neg = self.eat(&Tok::Minus);
        let mut acc = self.simple_term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            let sign = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            let continues =
                matches!(self.peek_at(1), Tok::Int(_)) || matches!(self.peek_at(1), Tok::Ident(s) if s == "sqrt");
            if !continues {
                break;
            }
            self.bump();
            let t = self.simple_term()?;
            acc = if sign { acc.sub(&t) } else { acc.add(&t) }.map_err(self.num_err(span))?;
        }
        Ok((acc, span))
    }

    fn simple_term(&mut self) -> PResult<ExactScalar> {
        if self.at_ident("sqrt") {
            return self.sqrt();
        }
        let span = self.span();
        let r = ExactScalar::Rational(self.rational()?);
        if self.peek() == &Tok::Star && matches!(self.peek_at(1), Tok::Ident(s) if s == "sqrt") {
            self.bump();
            let s = self.sqrt()?;
            return r.mul(&s).map_err(self.num_err(span));
        }
        Ok(r)
    }

    fn expr(&mut self) -> PResult<ExactScalar> {
        let mut acc = self.product()?;
        loop {
            let span = self.span();
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.product()?).map_err(self.num_err(span))?;
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.product()?).map_err(self.num_err(span))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> PResult<ExactScalar> {
        let mut acc = self.unary()?;
        loop {
            let span = self.span();
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.unary()?).map_err(self.num_err(span))?;
            } else if self.eat(&Tok::Slash) {
                acc = acc.div(&self.unary()?).map_err(self.num_err(span))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<ExactScalar> {
        if self.eat(&Tok::Minus) {
            return Ok(self.unary()?.neg());
        }
        if self.eat(&Tok::LParen) {
            let v = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(v);
        }
        if self.at_ident("sqrt") {
            return self.sqrt();
        }
        let (n, _) = self.int()?;
        Ok(ExactScalar::Rational(Rational::from_integer(n)))
    }

    /// Products of `r` and `r^(e)` with `r > 0` rational and `e` rational.
    pub(crate) fn radical(&mut self) -> PResult<RadicalReal> {
        let mut acc = self.radical_factor()?;
        while self.eat(&Tok::Star) {
            acc = acc.mul(&self.radical_factor()?);
        }
        Ok(acc)
    }

    fn radical_factor(&mut self) -> PResult<RadicalReal> {
        let span = self.span();
        let base = self.rational()?;
        let exp = if self.eat(&Tok::Caret) {
            self.expect(Tok::LParen)?;
            let e = self.signed_rational()?;
            self.expect(Tok::RParen)?;
            e
        } else {
            Rational::one()
        };
        radical_from_power(&base, &exp).map_err(self.num_err(span))
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }
}
