//! The line-oriented script language: parsing, execution into a report
//! bundle, and canonical JSON output.

use std::collections::HashMap;
use std::io::Write;

use serde_json::{json, Map, Value};

use crate::coeff::CoefficientField;
use crate::constructions::{
    amalgamation, nilpotency_check, polynomial_extension, trivial_extension, ConstructionKind, ConstructionResult,
    RingHom,
};
use crate::error::{Error, Result};
use crate::fpmodules::{Matrix, ModulePresentation};
use crate::grades::{grade, GradeKind};
use crate::groebner::{groebner_basis, krull_dimension, verify_maximal, Budget, IdealSpec, RingPresentation};
use crate::poly::{eval_expr, PolyRing, Polynomial};
use crate::syntax::{lex_line, Cursor, Expr, Tok, Token};
use crate::verify::{
    check_dim_bound, fpd_estimate, verify_depth_height, verify_min_formula, verify_poly, verify_prop_geq,
    verify_prop_items, MaximalIdealList, TheoremId, Verdict, VerifyConfig,
};

const DEFAULT_NILPOTENCY_CAP: usize = 16;

/// A name occurrence with its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Name {
    fn of(t: &Token) -> Name {
        match &t.tok {
            Tok::Ident(s) => Name { text: s.clone(), line: t.line, column: t.column },
            _ => unreachable!("expect_ident returns identifiers"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldRef {
    Literal(CoefficientField),
    Named(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Field { name: Name, field: CoefficientField },
    Ring { name: Name, field: FieldRef, vars: Vec<Name>, relations: Vec<Expr> },
    Ideal { name: Name, gens: Vec<Expr>, ring: Name },
    Module { name: Name, ring: Name, rows: usize, cols: usize, entries: Vec<Expr> },
    Hom { name: Name, source: Name, target: Name, maps: Vec<(Name, Expr)> },
    PolyExt { name: Name, base: Name, var: Name },
    TrivExt { name: Name, base: Name, module: Name },
    Amalg { name: Name, a: Name, b: Name, hom: Name, ideal: Name, modgens: Vec<Expr> },
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Field { name, .. }
            | Decl::Ring { name, .. }
            | Decl::Ideal { name, .. }
            | Decl::Module { name, .. }
            | Decl::Hom { name, .. }
            | Decl::PolyExt { name, .. }
            | Decl::TrivExt { name, .. }
            | Decl::Amalg { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyArgs {
    /// `<ring> using m1, m2, ...`
    Maximals { ring: Name, ideals: Vec<Name> },
    /// `<ring or polyext> at m1, m2, ...`
    Over { ring: Name, ideals: Vec<Name> },
    /// `<polyext> at <M> over <m> [monic <poly>]`
    PolyMaximal { ext: Name, big: Name, m: Name, monic: Option<Expr> },
    /// `<p> in <q>`
    Primes { p: Name, q: Name },
    /// `<ideal> on <module or ring> [within <ideal>]`
    Items { ideal: Name, on: Name, within: Option<Name> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Gb { ideal: Name },
    Dim { ring: Name },
    Grade { kind: GradeKind, ideal: Name, on: Name },
    Fpd { ring: Name, ideals: Vec<Name> },
    Maximal { ideal: Name },
    Nilpotent { ideal: Name, cap: usize },
    Verify { theorem: TheoremId, args: VerifyArgs },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    Decl(Decl),
    Query(Query),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    pub text: String,
    pub kind: StatementKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Field,
    Ring(Option<ConstructionKind>),
    Ideal,
    Module,
    Hom,
}

impl Kind {
    fn noun(&self) -> &'static str {
        match self {
            Kind::Field => "a field",
            Kind::Ring(None) => "a ring",
            Kind::Ring(Some(ConstructionKind::PolynomialExtension)) => "a polynomial extension",
            Kind::Ring(Some(ConstructionKind::TrivialExtension)) => "a trivial extension",
            Kind::Ring(Some(ConstructionKind::Amalgamation)) => "an amalgamation",
            Kind::Ideal => "an ideal",
            Kind::Module => "a module",
            Kind::Hom => "a homomorphism",
        }
    }
}

#[derive(Default)]
struct Scope {
    kinds: HashMap<String, Kind>,
}

impl Scope {
    fn bind(&mut self, name: &Name, kind: Kind) -> Result<()> {
        if self.kinds.contains_key(&name.text) {
            return Err(Error::Rebinding { name: name.text.clone(), line: name.line, column: name.column });
        }
        self.kinds.insert(name.text.clone(), kind);
        Ok(())
    }

    fn lookup(&self, name: &Name) -> Result<Kind> {
        self.kinds
            .get(&name.text)
            .copied()
            .ok_or_else(|| Error::Unbound { name: name.text.clone(), line: name.line, column: name.column })
    }

    fn expect(&self, name: &Name, ok: impl Fn(Kind) -> bool, wanted: &str) -> Result<Kind> {
        let k = self.lookup(name)?;
        if ok(k) {
            Ok(k)
        } else {
            Err(Error::Syntax {
                line: name.line,
                column: name.column,
                message: format!("`{}` is {}, expected {wanted}", name.text, k.noun()),
            })
        }
    }

    fn ring(&self, n: &Name) -> Result<Kind> {
        self.expect(n, |k| matches!(k, Kind::Ring(_)), "a ring")
    }

    fn ideal(&self, n: &Name) -> Result<()> {
        self.expect(n, |k| k == Kind::Ideal, "an ideal").map(|_| ())
    }

    fn module_or_ring(&self, n: &Name) -> Result<()> {
        self.expect(n, |k| matches!(k, Kind::Module | Kind::Ring(_)), "a module or a ring").map(|_| ())
    }

    fn construction(&self, n: &Name, kind: ConstructionKind) -> Result<()> {
        self.expect(n, |k| k == Kind::Ring(Some(kind)), Kind::Ring(Some(kind)).noun()).map(|_| ())
    }
}

fn expr_list(cur: &mut Cursor, open: char, close: char) -> Result<Vec<Expr>> {
    cur.expect_sym(open)?;
    let mut out = Vec::new();
    if cur.eat_sym(close) {
        return Ok(out);
    }
    loop {
        out.push(cur.parse_expr()?);
        if cur.eat_sym(close) {
            return Ok(out);
        }
        cur.expect_sym(',')?;
    }
}

fn name_list(cur: &mut Cursor) -> Result<Vec<Name>> {
    let mut out = vec![Name::of(cur.expect_ident()?)];
    while cur.eat_sym(',') {
        out.push(Name::of(cur.expect_ident()?));
    }
    Ok(out)
}

fn small_number(cur: &mut Cursor) -> Result<usize> {
    let n = cur.expect_number()?;
    usize::try_from(n).map_err(|_| cur.error_here("number too large"))
}

fn field_literal(cur: &mut Cursor, head: &Token) -> Result<Option<CoefficientField>> {
    let Tok::Ident(s) = &head.tok else { return Ok(None) };
    match s.as_str() {
        "QQ" => Ok(Some(CoefficientField::Rationals)),
        "Fp" => {
            cur.expect_sym('(')?;
            let at = cur.peek().map(|t| (t.line, t.column));
            let p = cur.expect_number()?;
            cur.expect_sym(')')?;
            let p = u64::try_from(p).ok().and_then(|p| CoefficientField::prime(p).ok());
            match (p, at) {
                (Some(f), _) => Ok(Some(f)),
                (None, Some((line, column))) => {
                    Err(Error::Syntax { line, column, message: "Fp needs a prime that fits in 64 bits".into() })
                }
                (None, None) => unreachable!("a number was read"),
            }
        }
        _ => Ok(None),
    }
}

fn theorem_id(cur: &mut Cursor) -> Result<(TheoremId, Token)> {
    let head = cur.expect_ident()?.clone();
    let mut text = Name::of(&head).text;
    while cur.eat_sym('-') {
        text.push('-');
        text.push_str(&Name::of(cur.expect_ident()?).text);
    }
    match TheoremId::parse(&text) {
        Some(id) => Ok((id, head)),
        None => Err(Error::Syntax { line: head.line, column: head.column, message: format!("unknown theorem `{text}`") }),
    }
}

fn parse_decl(cur: &mut Cursor, keyword: &str, scope: &mut Scope) -> Result<Decl> {
    let name = Name::of(cur.expect_ident()?);
    let decl = match keyword {
        "field" => {
            cur.expect_sym('=')?;
            let head = cur.expect_ident()?;
            match field_literal(cur, head)? {
                Some(field) => Decl::Field { name, field },
                None => return Err(Error::Syntax { line: head.line, column: head.column, message: "expected QQ or Fp(<prime>)".into() }),
            }
        }
        "ring" => {
            cur.expect_sym('=')?;
            let head = cur.expect_ident()?;
            let field = if scope.kinds.get(&Name::of(head).text) == Some(&Kind::Field) {
                FieldRef::Named(Name::of(head))
            } else {
                match field_literal(cur, head)? {
                    Some(f) => FieldRef::Literal(f),
                    None => {
                        scope.expect(&Name::of(head), |k| k == Kind::Field, "a field")?;
                        unreachable!("unbound or mismatched names error above")
                    }
                }
            };
            cur.expect_sym('[')?;
            let mut vars = Vec::new();
            if !cur.eat_sym(']') {
                vars = name_list(cur)?;
                cur.expect_sym(']')?;
            }
            let relations = if cur.eat_sym('/') { expr_list(cur, '(', ')')? } else { Vec::new() };
            Decl::Ring { name, field, vars, relations }
        }
        "ideal" => {
            cur.expect_sym('=')?;
            let gens = expr_list(cur, '(', ')')?;
            cur.expect_keyword("in")?;
            let ring = Name::of(cur.expect_ident()?);
            scope.ring(&ring)?;
            Decl::Ideal { name, gens, ring }
        }
        "module" => {
            cur.expect_sym('=')?;
            cur.expect_keyword("coker")?;
            let ring = Name::of(cur.expect_ident()?);
            scope.ring(&ring)?;
            cur.expect_keyword("matrix")?;
            let rows = small_number(cur)?;
            let cols = small_number(cur)?;
            let at = cur.peek().map(|t| (t.line, t.column));
            let entries = expr_list(cur, '[', ']')?;
            if entries.len() != rows * cols {
                let (line, column) = at.expect("a bracket was read");
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("a {rows}x{cols} matrix needs {} entries, found {}", rows * cols, entries.len()),
                });
            }
            Decl::Module { name, ring, rows, cols, entries }
        }
        "hom" => {
            cur.expect_sym(':')?;
            let source = Name::of(cur.expect_ident()?);
            scope.ring(&source)?;
            if cur.peek_tok() != Some(&Tok::Arrow) {
                return Err(cur.error_here("expected `->`"));
            }
            cur.advance();
            let target = Name::of(cur.expect_ident()?);
            scope.ring(&target)?;
            cur.expect_sym('(')?;
            let mut maps = Vec::new();
            if !cur.eat_sym(')') {
                loop {
                    let v = Name::of(cur.expect_ident()?);
                    if cur.peek_tok() != Some(&Tok::Arrow) {
                        return Err(cur.error_here("expected `->`"));
                    }
                    cur.advance();
                    maps.push((v, cur.parse_expr()?));
                    if cur.eat_sym(')') {
                        break;
                    }
                    cur.expect_sym(',')?;
                }
            }
            Decl::Hom { name, source, target, maps }
        }
        "polyext" => {
            cur.expect_sym('=')?;
            let base = Name::of(cur.expect_ident()?);
            scope.ring(&base)?;
            cur.expect_keyword("adjoin")?;
            let var = Name::of(cur.expect_ident()?);
            Decl::PolyExt { name, base, var }
        }
        "trivext" => {
            cur.expect_sym('=')?;
            let base = Name::of(cur.expect_ident()?);
            scope.ring(&base)?;
            cur.expect_sym('(')?;
            cur.expect_sym('+')?;
            cur.expect_sym(')')?;
            let module = Name::of(cur.expect_ident()?);
            scope.module_or_ring(&module)?;
            Decl::TrivExt { name, base, module }
        }
        "amalg" => {
            cur.expect_sym('=')?;
            let a = Name::of(cur.expect_ident()?);
            scope.ring(&a)?;
            cur.expect_keyword("join")?;
            let b = Name::of(cur.expect_ident()?);
            scope.ring(&b)?;
            cur.expect_keyword("via")?;
            let hom = Name::of(cur.expect_ident()?);
            scope.expect(&hom, |k| k == Kind::Hom, "a homomorphism")?;
            cur.expect_keyword("along")?;
            let ideal = Name::of(cur.expect_ident()?);
            scope.ideal(&ideal)?;
            cur.expect_keyword("modgens")?;
            let modgens = expr_list(cur, '[', ']')?;
            Decl::Amalg { name, a, b, hom, ideal, modgens }
        }
        _ => unreachable!("dispatch covers every declaration keyword"),
    };
    cur.expect_end()?;
    let kind = match keyword {
        "field" => Kind::Field,
        "ring" => Kind::Ring(None),
        "ideal" => Kind::Ideal,
        "module" => Kind::Module,
        "hom" => Kind::Hom,
        "polyext" => Kind::Ring(Some(ConstructionKind::PolynomialExtension)),
        "trivext" => Kind::Ring(Some(ConstructionKind::TrivialExtension)),
        _ => Kind::Ring(Some(ConstructionKind::Amalgamation)),
    };
    scope.bind(decl.name(), kind)?;
    Ok(decl)
}

fn parse_query(cur: &mut Cursor, scope: &Scope) -> Result<Query> {
    let head = cur.expect_ident()?;
    let word = Name::of(head).text;
    let q = match word.as_str() {
        "gb" => {
            let ideal = Name::of(cur.expect_ident()?);
            scope.ideal(&ideal)?;
            Query::Gb { ideal }
        }
        "dim" => {
            let ring = Name::of(cur.expect_ident()?);
            scope.ring(&ring)?;
            Query::Dim { ring }
        }
        "grade" => {
            let k = cur.expect_ident()?;
            let kind = GradeKind::parse(&Name::of(k).text).ok_or_else(|| Error::Syntax {
                line: k.line,
                column: k.column,
                message: "expected one of koszul, ext, cech, local, regseq".into(),
            })?;
            let ideal = Name::of(cur.expect_ident()?);
            scope.ideal(&ideal)?;
            cur.expect_keyword("on")?;
            let on = Name::of(cur.expect_ident()?);
            scope.module_or_ring(&on)?;
            Query::Grade { kind, ideal, on }
        }
        "fpd" => {
            let ring = Name::of(cur.expect_ident()?);
            scope.ring(&ring)?;
            cur.expect_keyword("using")?;
            let ideals = name_list(cur)?;
            for m in &ideals {
                scope.ideal(m)?;
            }
            Query::Fpd { ring, ideals }
        }
        "maximal" => {
            let ideal = Name::of(cur.expect_ident()?);
            scope.ideal(&ideal)?;
            Query::Maximal { ideal }
        }
        "nilpotent" => {
            let ideal = Name::of(cur.expect_ident()?);
            scope.ideal(&ideal)?;
            let cap = if cur.eat_keyword("cap") { small_number(cur)? } else { DEFAULT_NILPOTENCY_CAP };
            if cap == 0 {
                return Err(cur.error_here("cap must be at least 1"));
            }
            Query::Nilpotent { ideal, cap }
        }
        "verify" => {
            let (theorem, _) = theorem_id(cur)?;
            let args = match theorem {
                TheoremId::ThmDim => {
                    let ring = Name::of(cur.expect_ident()?);
                    scope.ring(&ring)?;
                    cur.expect_keyword("using")?;
                    let ideals = name_list(cur)?;
                    ideals.iter().try_for_each(|m| scope.ideal(m))?;
                    VerifyArgs::Maximals { ring, ideals }
                }
                TheoremId::PropGeq | TheoremId::ThmTrivext | TheoremId::ThmAmg => {
                    let ring = Name::of(cur.expect_ident()?);
                    match theorem {
                        TheoremId::ThmTrivext => scope.construction(&ring, ConstructionKind::TrivialExtension)?,
                        TheoremId::ThmAmg => scope.construction(&ring, ConstructionKind::Amalgamation)?,
                        _ => scope.ring(&ring).map(|_| ())?,
                    }
                    cur.expect_keyword("at")?;
                    let ideals = name_list(cur)?;
                    ideals.iter().try_for_each(|m| scope.ideal(m))?;
                    VerifyArgs::Over { ring, ideals }
                }
                TheoremId::ThmPoly | TheoremId::ThmScr => {
                    let ext = Name::of(cur.expect_ident()?);
                    scope.construction(&ext, ConstructionKind::PolynomialExtension)?;
                    cur.expect_keyword("at")?;
                    let big = Name::of(cur.expect_ident()?);
                    scope.ideal(&big)?;
                    cur.expect_keyword("over")?;
                    let m = Name::of(cur.expect_ident()?);
                    scope.ideal(&m)?;
                    let monic = if cur.eat_keyword("monic") { Some(cur.parse_expr()?) } else { None };
                    VerifyArgs::PolyMaximal { ext, big, m, monic }
                }
                TheoremId::LemmaDepthHt => {
                    let p = Name::of(cur.expect_ident()?);
                    scope.ideal(&p)?;
                    cur.expect_keyword("in")?;
                    let q = Name::of(cur.expect_ident()?);
                    scope.ideal(&q)?;
                    VerifyArgs::Primes { p, q }
                }
                TheoremId::PropItems => {
                    let ideal = Name::of(cur.expect_ident()?);
                    scope.ideal(&ideal)?;
                    cur.expect_keyword("on")?;
                    let on = Name::of(cur.expect_ident()?);
                    scope.module_or_ring(&on)?;
                    let within = if cur.eat_keyword("within") {
                        let j = Name::of(cur.expect_ident()?);
                        scope.ideal(&j)?;
                        Some(j)
                    } else {
                        None
                    };
                    VerifyArgs::Items { ideal, on, within }
                }
            };
            Query::Verify { theorem, args }
        }
        _ => {
            return Err(Error::Syntax {
                line: head.line,
                column: head.column,
                message: format!("unknown query `{word}`"),
            })
        }
    };
    cur.expect_end()?;
    Ok(q)
}

/// Parses a whole script, checking that names are bound once, before use,
/// to values of the right kind.
pub fn parse_script(text: &str) -> Result<Script> {
    let mut scope = Scope::default();
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, line, raw.chars().count() + 1);
        let head = cur.expect_ident().map_err(|_| cur.error_here("expected a declaration or `query`"))?;
        let word = Name::of(head).text;
        let kind = match word.as_str() {
            "query" => StatementKind::Query(parse_query(&mut cur, &scope)?),
            "field" | "ring" | "ideal" | "module" | "hom" | "polyext" | "trivext" | "amalg" => {
                StatementKind::Decl(parse_decl(&mut cur, &word, &mut scope)?)
            }
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: head.column,
                    message: format!("expected a declaration or `query`, found `{word}`"),
                })
            }
        };
        let text = raw.split('#').next().unwrap_or("").trim().to_string();
        statements.push(Statement { line, text, kind });
    }
    Ok(Script { statements })
}

/// Run parameters, echoed into the report bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub power_cap: usize,
    pub grade_bound: usize,
    pub trials: usize,
    pub seed: u64,
    /// Gröbner basis-size cap.
    pub budget: usize,
    pub assume_maximal: bool,
    pub equidimensional: bool,
    pub exhaustive: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            power_cap: 8,
            grade_bound: 12,
            trials: 200,
            seed: 0,
            budget: Budget::default().max_basis,
            assume_maximal: false,
            equidimensional: false,
            exhaustive: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("power cap", self.power_cap),
            ("grade bound", self.grade_bound),
            ("trials", self.trials),
            ("budget", self.budget),
        ] {
            if v == 0 {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            bound: self.grade_bound,
            power_cap: self.power_cap,
            trials: self.trials,
            seed: self.seed,
            assume_maximal: self.assume_maximal,
            equidimensional: self.equidimensional,
            exhaustive: self.exhaustive,
        }
    }

    fn budget(&self) -> Budget {
        Budget { max_basis: self.budget, ..Budget::default() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "power_cap": self.power_cap,
            "grade_bound": self.grade_bound,
            "trials": self.trials,
            "seed": self.seed,
            "budget": self.budget,
            "assume_maximal": self.assume_maximal,
            "equidimensional": self.equidimensional,
            "exhaustive": self.exhaustive,
        })
    }
}

/// Result of one query or failed declaration.
#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub statement: String,
    pub outcome: std::result::Result<Value, Error>,
    pub violated: bool,
}

impl Entry {
    fn to_json(&self) -> Value {
        let mut v = json!({ "line": self.line, "statement": self.statement });
        match &self.outcome {
            Ok(r) => {
                v["status"] = json!(if self.violated { "violated" } else { "ok" });
                v["result"] = r.clone();
            }
            Err(e) => {
                v["status"] = json!("error");
                v["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
            }
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub config: RunConfig,
    pub entries: Vec<Entry>,
}

impl ReportBundle {
    pub fn errors(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_err()).count()
    }

    pub fn violations(&self) -> usize {
        self.entries.iter().filter(|e| e.violated).count()
    }

    /// 2 if any verification was violated, else 1 if anything errored, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.violations() > 0 {
            2
        } else if self.errors() > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        canonical(&json!({
            "config": self.config.to_json(),
            "entries": self.entries.iter().map(Entry::to_json).collect::<Vec<_>>(),
            "summary": {
                "entries": self.entries.len(),
                "errors": self.errors(),
                "violations": self.violations(),
                "exit_code": self.exit_code(),
            },
        }))
    }

    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

/// Rebuilds every object with its keys in sorted order.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&map[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

/// Writes the bundle to `path`, or to standard output for `-`.
pub fn emit_report(bundle: &ReportBundle, path: &str) -> Result<()> {
    let text = bundle.to_canonical_string();
    let io = |e: std::io::Error| Error::Io(format!("{path}: {e}"));
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).map_err(io)?;
        out.flush().map_err(io)
    } else {
        std::fs::write(path, text).map_err(io)
    }
}

#[derive(Clone)]
enum Binding {
    Field(CoefficientField),
    Ring(RingPresentation, Option<ConstructionResult>),
    Ideal(IdealSpec),
    Module(ModulePresentation),
    Hom(RingHom),
    Failed,
}

impl Binding {
    /// Declaration text that rebinds an equivalent value, given the names
    /// of the rings involved.
    fn declaration(&self, name: &str, ring_name: &str) -> Option<String> {
        Some(match self {
            Binding::Field(f) => format!("field {name} = {f}"),
            Binding::Ring(r, _) => format!("ring {name} = {r}"),
            Binding::Ideal(i) => format!("ideal {name} = {i} in {ring_name}"),
            Binding::Module(m) => format!("module {name} = coker {ring_name} {}", m.relations()),
            Binding::Hom(_) | Binding::Failed => return None,
        })
    }
}

struct Env {
    config: RunConfig,
    bindings: HashMap<String, Binding>,
}

impl Env {
    fn get(&self, n: &Name) -> Result<&Binding> {
        match self.bindings.get(&n.text) {
            Some(Binding::Failed) => Err(Error::PreconditionViolation(format!(
                "`{}` is unavailable because its declaration failed",
                n.text
            ))),
            Some(b) => Ok(b),
            None => Err(Error::Unbound { name: n.text.clone(), line: n.line, column: n.column }),
        }
    }

    fn ring(&self, n: &Name) -> Result<(RingPresentation, Option<ConstructionResult>)> {
        match self.get(n)? {
            Binding::Ring(r, c) => Ok((r.clone(), c.clone())),
            _ => unreachable!("kinds are checked while parsing"),
        }
    }

    fn ideal(&self, n: &Name) -> Result<IdealSpec> {
        match self.get(n)? {
            Binding::Ideal(i) => Ok(i.clone()),
            _ => unreachable!("kinds are checked while parsing"),
        }
    }

    fn module(&self, n: &Name) -> Result<ModulePresentation> {
        match self.get(n)? {
            Binding::Module(m) => Ok(m.clone()),
            Binding::Ring(r, _) => Ok(ModulePresentation::free(r, 1)),
            _ => unreachable!("kinds are checked while parsing"),
        }
    }

    fn construction(&self, n: &Name) -> Result<ConstructionResult> {
        match self.ring(n)? {
            (_, Some(c)) => Ok(c),
            _ => unreachable!("construction kinds are checked while parsing"),
        }
    }

    fn polys(ring: &RingPresentation, exprs: &[Expr]) -> Result<Vec<Polynomial>> {
        exprs.iter().map(|e| eval_expr(ring.ambient(), e)).collect()
    }

    fn declare(&self, d: &Decl) -> Result<Binding> {
        Ok(match d {
            Decl::Field { field, .. } => Binding::Field(*field),
            Decl::Ring { field, vars, relations, .. } => {
                let field = match field {
                    FieldRef::Literal(f) => *f,
                    FieldRef::Named(n) => match self.get(n)? {
                        Binding::Field(f) => *f,
                        _ => unreachable!("kinds are checked while parsing"),
                    },
                };
                let names: Vec<&str> = vars.iter().map(|v| v.text.as_str()).collect();
                let ambient = PolyRing::grevlex(field, &names)?;
                let rels = relations.iter().map(|e| eval_expr(&ambient, e)).collect::<Result<Vec<_>>>()?;
                Binding::Ring(RingPresentation::new(ambient, rels, self.config.budget())?, None)
            }
            Decl::Ideal { gens, ring, .. } => {
                let (r, _) = self.ring(ring)?;
                Binding::Ideal(IdealSpec::new(&r, Env::polys(&r, gens)?)?)
            }
            Decl::Module { ring, rows, cols, entries, .. } => {
                let (r, _) = self.ring(ring)?;
                let m = Matrix::new(*rows, *cols, Env::polys(&r, entries)?)?;
                Binding::Module(ModulePresentation::new(&r, m)?)
            }
            Decl::Hom { source, target, maps, .. } => {
                let (s, _) = self.ring(source)?;
                let (t, _) = self.ring(target)?;
                let mut images: Vec<Option<Polynomial>> = vec![None; s.nvars()];
                for (v, e) in maps {
                    let i = s.ambient().var_index(&v.text).ok_or_else(|| Error::Syntax {
                        line: v.line,
                        column: v.column,
                        message: format!("`{}` is not a variable of `{}`", v.text, source.text),
                    })?;
                    if images[i].is_some() {
                        return Err(Error::Syntax { line: v.line, column: v.column, message: format!("`{}` is mapped twice", v.text) });
                    }
                    images[i] = Some(eval_expr(t.ambient(), e)?);
                }
                let images = images
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| p.ok_or_else(|| Error::invalid(format!("no image given for `{}`", s.names()[i]))))
                    .collect::<Result<Vec<_>>>()?;
                Binding::Hom(RingHom::new(&s, &t, images)?)
            }
            Decl::PolyExt { base, var, .. } => {
                let (r, _) = self.ring(base)?;
                let c = polynomial_extension(&r, &var.text)?;
                Binding::Ring(c.ring().clone(), Some(c))
            }
            Decl::TrivExt { base, module, .. } => {
                let (r, _) = self.ring(base)?;
                let c = trivial_extension(&r, &self.module(module)?)?;
                Binding::Ring(c.ring().clone(), Some(c))
            }
            Decl::Amalg { a, b, hom, ideal, modgens, .. } => {
                let (ra, _) = self.ring(a)?;
                let (rb, _) = self.ring(b)?;
                let Binding::Hom(f) = self.get(hom)? else { unreachable!("kinds are checked while parsing") };
                let j = self.ideal(ideal)?;
                let c = amalgamation(&ra, &rb, f, &j, &Env::polys(&rb, modgens)?)?;
                Binding::Ring(c.ring().clone(), Some(c))
            }
        })
    }

    fn query(&self, q: &Query) -> Result<(Value, bool)> {
        let vc = self.config.verify_config();
        let plain = |v: Value| Ok((v, false));
        match q {
            Query::Gb { ideal } => {
                let i = self.ideal(ideal)?;
                let gb = groebner_basis(&i)?;
                plain(json!({
                    "ring": i.ring().to_string(),
                    "ideal": i.to_string(),
                    "basis": gb.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "reduced": gb.is_reduced(),
                }))
            }
            Query::Dim { ring } => {
                let (r, _) = self.ring(ring)?;
                plain(json!({ "ring": r.to_string(), "krull_dimension": krull_dimension(&r) }))
            }
            Query::Grade { kind, ideal, on } => {
                let i = self.ideal(ideal)?;
                let m = self.module(on)?;
                let c = &self.config;
                let mut v = grade(*kind, &i, &m, c.grade_bound, c.power_cap, c.trials, c.seed)?.to_json();
                v["on"] = json!(on.text);
                plain(v)
            }
            Query::Fpd { ring, ideals } => {
                let (r, _) = self.ring(ring)?;
                let ms = ideals.iter().map(|n| self.ideal(n)).collect::<Result<Vec<_>>>()?;
                let mx = MaximalIdealList::new(&r, ms, &vc)?;
                let mut v = fpd_estimate(&mx, &vc)?.to_json();
                v["ring"] = json!(r.to_string());
                plain(v)
            }
            Query::Maximal { ideal } => {
                let i = self.ideal(ideal)?;
                let rep = verify_maximal(&i, self.config.trials, self.config.seed)?;
                plain(json!({
                    "ideal": i.to_string(),
                    "verdict": rep.verdict.as_str(),
                    "quotient_dim": rep.quotient_dim,
                    "certificate": rep.certificate.map(|(e, f)| json!({ "element": e, "minimal_polynomial": f })),
                    "reason": rep.reason,
                }))
            }
            Query::Nilpotent { ideal, cap } => {
                let i = self.ideal(ideal)?;
                plain(json!({ "ideal": i.to_string(), "cap": cap, "index": nilpotency_check(&i, *cap)? }))
            }
            Query::Verify { theorem, args } => {
                let reports = self.verify(*theorem, args, &vc)?;
                let violated = reports.iter().any(|r| r.verdict == Verdict::Violated);
                let verdict = if violated {
                    Verdict::Violated
                } else if reports.iter().all(|r| r.verdict == Verdict::Verified) {
                    Verdict::Verified
                } else {
                    Verdict::Inconclusive
                };
                Ok((
                    json!({
                        "theorem-id": theorem.as_str(),
                        "verdict": verdict.as_str(),
                        "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    }),
                    violated,
                ))
            }
        }
    }

    fn verify(&self, id: TheoremId, args: &VerifyArgs, vc: &VerifyConfig) -> Result<Vec<crate::verify::VerificationReport>> {
        let ideals = |ns: &[Name]| ns.iter().map(|n| self.ideal(n)).collect::<Result<Vec<_>>>();
        match args {
            VerifyArgs::Maximals { ring, ideals: ns } => {
                let (r, _) = self.ring(ring)?;
                Ok(vec![check_dim_bound(&MaximalIdealList::new(&r, ideals(ns)?, vc)?, vc)?])
            }
            VerifyArgs::Over { ring, ideals: ns } if id == TheoremId::PropGeq => {
                let (r, c) = self.ring(ring)?;
                let (base, var) = match c.filter(|c| c.kind() == ConstructionKind::PolynomialExtension) {
                    Some(c) => (c.base().clone(), c.ring().names().last().cloned().expect("adjoined variable")),
                    None => (r.clone(), fresh_variable(&r)),
                };
                ideals(ns)?.iter().map(|m| verify_prop_geq(&base, m, &var, vc)).collect()
            }
            VerifyArgs::Over { ring, ideals: ns } => {
                let c = self.construction(ring)?;
                ideals(ns)?.iter().map(|m| verify_min_formula(id, &c, m, vc)).collect()
            }
            VerifyArgs::PolyMaximal { ext, big, m, monic } => {
                let c = self.construction(ext)?;
                let f = monic.as_ref().map(|e| eval_expr(c.ring().ambient(), e)).transpose()?;
                Ok(vec![verify_poly(id, &c, &self.ideal(big)?, &self.ideal(m)?, f.as_ref(), vc)?])
            }
            VerifyArgs::Primes { p, q } => Ok(vec![verify_depth_height(&self.ideal(p)?, &self.ideal(q)?, vc)?]),
            VerifyArgs::Items { ideal, on, within } => {
                let j = within.as_ref().map(|n| self.ideal(n)).transpose()?;
                verify_prop_items(&self.ideal(ideal)?, &self.module(on)?, j.as_ref(), vc)
            }
        }
    }
}

fn fresh_variable(r: &RingPresentation) -> String {
    let mut name = "x".to_string();
    let mut k = 1;
    while r.names().contains(&name) {
        name = format!("x_{k}");
        k += 1;
    }
    name
}

/// Runs every statement in order. Failures are recorded per statement and
/// the run continues.
pub fn execute(script: &Script, config: &RunConfig) -> Result<ReportBundle> {
    config.validate()?;
    let mut env = Env { config: *config, bindings: HashMap::new() };
    let mut entries = Vec::new();
    for st in &script.statements {
        match &st.kind {
            StatementKind::Decl(d) => {
                let binding = match env.declare(d) {
                    Ok(b) => b,
                    Err(e) => {
                        entries.push(Entry { line: st.line, statement: st.text.clone(), outcome: Err(e), violated: false });
                        Binding::Failed
                    }
                };
                env.bindings.insert(d.name().text.clone(), binding);
            }
            StatementKind::Query(q) => {
                let (outcome, violated) = match env.query(q) {
                    Ok((v, violated)) => (Ok(v), violated),
                    Err(e) => (Err(e), false),
                };
                entries.push(Entry { line: st.line, statement: st.text.clone(), outcome, violated });
            }
        }
    }
    Ok(ReportBundle { config: *config, entries })
}

/// Prints every successful declaration back as script text; re-parsing the
/// output rebinds equivalent values.
pub fn declarations_text(script: &Script, config: &RunConfig) -> Result<String> {
    let mut env = Env { config: *config, bindings: HashMap::new() };
    let mut out = String::new();
    for st in &script.statements {
        let StatementKind::Decl(d) = &st.kind else { continue };
        let b = env.declare(d).unwrap_or(Binding::Failed);
        let ring_name = match d {
            Decl::Ideal { ring, .. } | Decl::Module { ring, .. } => ring.text.as_str(),
            _ => "",
        };
        if let Some(text) = b.declaration(&d.name().text, ring_name) {
            out.push_str(&text);
            out.push('\n');
        }
        env.bindings.insert(d.name().text.clone(), b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> ReportBundle {
        execute(&parse_script(text).unwrap(), &RunConfig { power_cap: 3, trials: 50, ..RunConfig::default() }).unwrap()
    }

    #[test]
    fn parses_declarations() {
        let s = parse_script("ring R = QQ[x,y] / (x^2, x*y)\nideal m = (x, y) in R\nquery grade koszul m on R").unwrap();
        assert_eq!(s.statements.len(), 3);
        assert!(matches!(&s.statements[2].kind, StatementKind::Query(Query::Grade { kind: GradeKind::Koszul, .. })));
    }

    #[test]
    fn syntax_errors_point_at_token() {
        let e = parse_script("ring R = QQ[x,y]\nideal m = x, y in R").unwrap_err();
        assert_eq!(e, Error::Syntax { line: 2, column: 11, message: "expected `(`, found `x`".into() });
        let e = parse_script("ideal m = (x) in R").unwrap_err();
        assert!(matches!(e, Error::Unbound { ref name, line: 1, column: 18 } if name == "R"));
        let e = parse_script("ring R = QQ[x]\nring R = QQ[y]").unwrap_err();
        assert!(matches!(e, Error::Rebinding { line: 2, column: 6, .. }));
        let e = parse_script("ring R = QQ[x]\nquery dim m\n").unwrap_err();
        assert!(matches!(e, Error::Unbound { line: 2, .. }));
        let e = parse_script("ring R = QQ[x]\nideal m = (x) in R\nquery dim m").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, column: 11, .. }));
        assert!(parse_script("ring R = Fp(4)[x]").is_err());
        assert!(parse_script("query verify thm-nope R").is_err());
    }

    #[test]
    fn empty_script() {
        let b = run("# nothing\n\n");
        assert!(b.entries.is_empty());
        assert_eq!(b.exit_code(), 0);
    }

    #[test]
    fn unit_ideal_grade_errors() {
        let b = run("ring R = QQ[x]\nideal u = (1) in R\nquery grade koszul u on R\nquery dim R");
        assert_eq!(b.entries.len(), 2);
        assert!(b.entries[0].outcome.is_err());
        assert_eq!(b.exit_code(), 1);
    }

    #[test]
    fn trivext_demo() {
        let b = run(
            "ring R = QQ[x]\nideal m = (x) in R\nmodule M = coker R matrix 1 1 [x]\ntrivext T = R (+) M\nquery verify thm-trivext T at m",
        );
        assert_eq!(b.exit_code(), 0);
        let v = b.to_json();
        assert_eq!(v["entries"][0]["result"]["verdict"], "verified");
    }

    #[test]
    fn failed_declaration_poisons_dependents() {
        let b = run("ring R = QQ[x] / (1)\nquery dim R");
        assert_eq!(b.entries.len(), 2);
        assert!(b.entries.iter().all(|e| e.outcome.is_err()));
    }

    #[test]
    fn hom_and_amalg() {
        let b = run(
            "ring A = QQ[x]\nring B = QQ[x,e] / (e^2)\nhom f : A -> B (x -> x)\nideal J = (e) in B\n\
             amalg C = A join B via f along J modgens [1, e]\nideal m = (x) in A\nquery verify thm-amg C at m\nquery dim C",
        );
        assert_eq!(b.exit_code(), 0, "{}", b.to_canonical_string());
    }

    #[test]
    fn violation_outranks_error() {
        let entry = |outcome, violated| Entry { line: 1, statement: String::new(), outcome, violated };
        let mut b = ReportBundle { config: RunConfig::default(), entries: vec![entry(Ok(json!({})), false)] };
        assert_eq!(b.exit_code(), 0);
        b.entries.push(entry(Err(Error::invalid("x")), false));
        assert_eq!(b.exit_code(), 1);
        b.entries.push(entry(Ok(json!({})), true));
        assert_eq!(b.exit_code(), 2);
        assert_eq!(b.to_json()["entries"][2]["status"], "violated");
    }

    #[test]
    fn keys_are_sorted() {
        let s = run("ring R = QQ[x]\nquery dim R").to_canonical_string();
        let config = s.find("\"config\"").unwrap();
        let entries = s.find("\"entries\"").unwrap();
        let summary = s.find("\"summary\"").unwrap();
        assert!(config < entries && entries < summary);
    }

    #[test]
    fn declarations_round_trip() {
        let text = "field F = Fp(7)\nring R = F[x,y] / (x^2 - 3*y, x*y)\nideal m = (x + y, y^2) in R\nmodule M = coker R matrix 2 1 [x, y]";
        let cfg = RunConfig::default();
        let printed = declarations_text(&parse_script(text).unwrap(), &cfg).unwrap();
        let again = declarations_text(&parse_script(&printed).unwrap(), &cfg).unwrap();
        assert_eq!(printed, again);
    }
}
