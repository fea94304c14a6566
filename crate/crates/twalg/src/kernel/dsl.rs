//! Lexer, parser and printer for the block language.
//!
//! A file is a sequence of blocks. Everything is resolved by name later, so
//! the parser only checks shape, except for `signature` blocks which are
//! validated immediately.

use super::{Identity, Signature, Term};
use crate::error::{Error, Result};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Arrow,
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() {
                let st = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[st..i].iter().collect()), line, col });
                continue;
            }
            if c.is_ascii_digit() {
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[st..i].iter().collect();
                let n = s.parse().map_err(|_| Error::Syntax { line, col, msg: "number too large".into() })?;
                out.push(Token { tok: Tok::Num(n), line, col });
                continue;
            }
            if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line, col });
                i += 2;
                continue;
            }
            if "{}()[];:,=@|".contains(c) {
                out.push(Token { tok: Tok::Punct(c), line, col });
                i += 1;
                continue;
            }
            return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Token sequence with comments and layout removed, joined by single spaces.
pub fn normalize(text: &str) -> Result<String> {
    let toks = lex(text)?;
    Ok(toks
        .iter()
        .map(|t| match &t.tok {
            Tok::Ident(s) => s.clone(),
            Tok::Num(n) => n.to_string(),
            Tok::Arrow => "->".into(),
            Tok::Punct(c) => c.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" "))
}

/// A variable of a coproduct term: `label@j` names `label` in summand `j`.
pub fn coproduct_var(label: &str, summand: usize) -> String {
    format!("{label}@{summand}")
}

pub fn split_coproduct_var(v: &str) -> Option<(&str, usize)> {
    let (l, j) = v.rsplit_once('@')?;
    Some((l, j.parse().ok()?))
}

/// A homomorphism written as its target and per-sort image lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomDecl {
    pub target: String,
    pub images: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyDecl {
    pub name: String,
    pub signature: String,
    pub identities: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDecl {
    pub name: String,
    pub signature: String,
    pub carriers: Vec<(String, Vec<String>)>,
    pub tables: Vec<(String, Vec<String>)>,
    pub generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraDecl {
    pub name: String,
    pub variety: String,
    pub ambient: String,
    pub components: Vec<(String, String)>,
    /// Per co-operation, images of chosen elements as terms over `label@j`.
    pub coops: Vec<(String, Vec<(String, Term)>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationDecl {
    pub name: String,
    pub base: String,
    pub stages: Vec<(String, HomDecl)>,
    pub leqs: Vec<(String, String, HomDecl)>,
}

/// `(component, left label, right label, value)` rows of a bracket table.
pub type BracketRow = (String, String, String, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidDecl {
    pub name: String,
    pub object: String,
    pub mu: Vec<BracketRow>,
    pub eta: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub monoid: String,
    pub object: String,
    pub rho: Vec<BracketRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Signature(Signature),
    Identity(Identity),
    Variety(VarietyDecl),
    Algebra(AlgebraDecl),
    Coalgebra(CoalgebraDecl),
    Filtration(FiltrationDecl),
    Monoid(MonoidDecl),
    Module(ModuleDecl),
}

impl Block {
    pub fn name(&self) -> &str {
        match self {
            Block::Signature(s) => &s.name,
            Block::Identity(i) => &i.name,
            Block::Variety(v) => &v.name,
            Block::Algebra(a) => &a.name,
            Block::Coalgebra(c) => &c.name,
            Block::Filtration(f) => &f.name,
            Block::Monoid(m) => &m.name,
            Block::Module(m) => &m.name,
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end);
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn punct(&mut self, c: char) -> Result<()> {
        if self.at_punct(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn arrow(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            self.err("expected `->`")
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    /// An element label: a name or a numeral.
    fn label(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.to_string();
                self.pos += 1;
                Ok(n)
            }
            _ => self.ident(),
        }
    }

    fn num(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn kw(&mut self, kw: &str) -> Result<()> {
        if self.at_kw(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    /// `open item (, item)* close`, possibly empty.
    fn list<T>(&mut self, open: char, close: char, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.punct(open)?;
        let mut out = Vec::new();
        if self.at_punct(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.at_punct(',') {
                self.pos += 1;
                continue;
            }
            self.punct(close)?;
            return Ok(out);
        }
    }

    fn term(&mut self) -> Result<Term> {
        let head = self.ident()?;
        if self.at_punct('(') {
            let args = self.list('(', ')', |p| p.term())?;
            return Ok(Term::App(head, args));
        }
        if self.at_punct('@') {
            self.pos += 1;
            let j = self.num()?;
            return Ok(Term::Var(coproduct_var(&head, j)));
        }
        Ok(Term::Var(head))
    }

    fn hom(&mut self) -> Result<HomDecl> {
        let target = self.ident()?;
        self.punct('[')?;
        let mut images = vec![Vec::new()];
        if self.at_punct(']') {
            self.pos += 1;
            return Ok(HomDecl { target, images });
        }
        loop {
            if self.at_punct('|') {
                self.pos += 1;
                images.push(Vec::new());
                continue;
            }
            images.last_mut().unwrap().push(self.label()?);
            if self.at_punct(',') {
                self.pos += 1;
            } else if self.at_punct('|') {
                continue;
            } else {
                self.punct(']')?;
                return Ok(HomDecl { target, images });
            }
        }
    }

    /// Items separated by `;` inside braces; a trailing `;` is allowed.
    fn body(&mut self, mut item: impl FnMut(&mut Self) -> Result<()>) -> Result<()> {
        self.punct('{')?;
        loop {
            if self.at_punct('}') {
                self.pos += 1;
                return Ok(());
            }
            item(self)?;
            if self.at_punct(';') {
                self.pos += 1;
            } else {
                return self.punct('}');
            }
        }
    }

    fn signature(&mut self) -> Result<Signature> {
        let name = self.ident()?;
        let mut sig = Signature { name, sorts: Vec::new(), ops: Vec::new() };
        let mut seen_sorts = false;
        self.body(|p| {
            if p.at_kw("sorts") {
                if seen_sorts {
                    return p.err("sorts declared twice");
                }
                seen_sorts = true;
                p.pos += 1;
                p.punct(':')?;
                while let Some(Tok::Ident(_)) = p.peek() {
                    let s = p.ident()?;
                    sig.add_sort(&s)?;
                }
                Ok(())
            } else if p.at_kw("op") {
                p.pos += 1;
                let sym = p.ident()?;
                p.punct(':')?;
                let mut ins = Vec::new();
                while let Some(Tok::Ident(_)) = p.peek() {
                    ins.push(p.ident()?);
                }
                p.arrow()?;
                let out = p.ident()?;
                sig.add_op(&sym, &ins, &out)
            } else {
                p.err("expected `sorts` or `op`")
            }
        })?;
        Ok(sig)
    }

    fn identity(&mut self) -> Result<Identity> {
        let name = self.ident()?;
        let vars = self.list('(', ')', |p| {
            let v = p.ident()?;
            p.punct(':')?;
            Ok((v, p.ident()?))
        })?;
        self.punct(':')?;
        let lhs = self.term()?;
        self.punct('=')?;
        let rhs = self.term()?;
        Ok(Identity { name, vars, lhs, rhs })
    }

    fn names(&mut self, open: char, close: char) -> Result<Vec<String>> {
        self.list(open, close, |p| p.label())
    }

    fn variety(&mut self) -> Result<VarietyDecl> {
        let name = self.ident()?;
        let (mut signature, mut identities, mut generators) = (None, None, None);
        self.body(|p| {
            let key = p.ident()?;
            p.punct(':')?;
            match key.as_str() {
                "signature" if signature.is_none() => signature = Some(p.ident()?),
                "identities" if identities.is_none() => identities = Some(p.names('[', ']')?),
                "generators" if generators.is_none() => generators = Some(p.names('[', ']')?),
                _ => {
                    p.pos -= 2;
                    return p.err(format!("unexpected or repeated field `{key}`"));
                }
            }
            Ok(())
        })?;
        let Some(signature) = signature else { return self.err("variety without signature") };
        Ok(VarietyDecl {
            name,
            signature,
            identities: identities.unwrap_or_default(),
            generators: generators.unwrap_or_default(),
        })
    }

    fn algebra(&mut self) -> Result<AlgebraDecl> {
        let name = self.ident()?;
        self.kw("of")?;
        let signature = self.ident()?;
        let mut a = AlgebraDecl { name, signature, carriers: vec![], tables: vec![], generators: None };
        self.body(|p| {
            if p.at_kw("carrier") {
                p.pos += 1;
                let s = p.ident()?;
                p.punct('=')?;
                a.carriers.push((s, p.names('{', '}')?));
            } else if p.at_kw("table") {
                p.pos += 1;
                let s = p.ident()?;
                p.punct('=')?;
                a.tables.push((s, p.names('[', ']')?));
            } else if p.at_kw("generators") {
                p.pos += 1;
                p.punct('=')?;
                a.generators = Some(p.names('{', '}')?);
            } else {
                return p.err("expected `carrier`, `table` or `generators`");
            }
            Ok(())
        })?;
        Ok(a)
    }

    fn coalgebra(&mut self) -> Result<CoalgebraDecl> {
        let name = self.ident()?;
        let mut c = CoalgebraDecl { name, variety: String::new(), ambient: String::new(), components: vec![], coops: vec![] };
        self.body(|p| {
            if p.at_kw("variety") {
                p.pos += 1;
                p.punct(':')?;
                c.variety = p.ident()?;
                p.kw("in")?;
                c.ambient = p.ident()?;
            } else if p.at_kw("component") {
                p.pos += 1;
                let s = p.ident()?;
                p.punct('=')?;
                c.components.push((s, p.ident()?));
            } else if p.at_kw("coop") {
                p.pos += 1;
                let op = p.ident()?;
                p.punct('=')?;
                let imgs = p.list('[', ']', |p| {
                    let y = p.label()?;
                    p.arrow()?;
                    Ok((y, p.term()?))
                })?;
                c.coops.push((op, imgs));
            } else {
                return p.err("expected `variety`, `component` or `coop`");
            }
            Ok(())
        })?;
        if c.variety.is_empty() {
            return self.err("coalgebra without variety");
        }
        Ok(c)
    }

    fn filtration(&mut self) -> Result<FiltrationDecl> {
        let name = self.ident()?;
        self.kw("on")?;
        let base = self.ident()?;
        let mut f = FiltrationDecl { name, base, stages: vec![], leqs: vec![] };
        self.body(|p| {
            if p.at_kw("stage") {
                p.pos += 1;
                let l = p.ident()?;
                p.punct(':')?;
                f.stages.push((l, p.hom()?));
            } else if p.at_kw("leq") {
                p.pos += 1;
                let l = p.ident()?;
                let m = p.ident()?;
                p.kw("via")?;
                f.leqs.push((l, m, p.hom()?));
            } else {
                return p.err("expected `stage` or `leq`");
            }
            Ok(())
        })?;
        Ok(f)
    }

    fn bracket_row(&mut self) -> Result<BracketRow> {
        let i = self.ident()?;
        self.punct('(')?;
        let a = self.label()?;
        self.punct(',')?;
        let y = self.label()?;
        self.punct(')')?;
        self.punct('=')?;
        Ok((i, a, y, self.label()?))
    }

    fn monoid(&mut self) -> Result<MonoidDecl> {
        let name = self.ident()?;
        let mut m = MonoidDecl { name, object: String::new(), mu: vec![], eta: vec![] };
        self.body(|p| {
            if p.at_kw("object") {
                p.pos += 1;
                p.punct(':')?;
                m.object = p.ident()?;
            } else if p.at_kw("mu") {
                p.pos += 1;
                m.mu.push(p.bracket_row()?);
            } else if p.at_kw("eta") {
                p.pos += 1;
                let i = p.ident()?;
                p.punct('=')?;
                m.eta.push((i, p.label()?));
            } else {
                return p.err("expected `object`, `mu` or `eta`");
            }
            Ok(())
        })?;
        Ok(m)
    }

    fn module(&mut self) -> Result<ModuleDecl> {
        let name = self.ident()?;
        let mut m = ModuleDecl { name, monoid: String::new(), object: String::new(), rho: vec![] };
        self.body(|p| {
            if p.at_kw("monoid") {
                p.pos += 1;
                p.punct(':')?;
                m.monoid = p.ident()?;
            } else if p.at_kw("object") {
                p.pos += 1;
                p.punct(':')?;
                m.object = p.ident()?;
            } else if p.at_kw("rho") {
                p.pos += 1;
                m.rho.push(p.bracket_row()?);
            } else {
                return p.err("expected `monoid`, `object` or `rho`");
            }
            Ok(())
        })?;
        Ok(m)
    }

    fn block(&mut self) -> Result<Block> {
        let kw = self.ident()?;
        Ok(match kw.as_str() {
            "signature" => Block::Signature(self.signature()?),
            "identity" => Block::Identity(self.identity()?),
            "variety" => Block::Variety(self.variety()?),
            "algebra" => Block::Algebra(self.algebra()?),
            "coalgebra" => Block::Coalgebra(self.coalgebra()?),
            "filtration" => Block::Filtration(self.filtration()?),
            "monoid" => Block::Monoid(self.monoid()?),
            "module" => Block::Module(self.module()?),
            _ => {
                self.pos -= 1;
                return self.err(format!("unknown block `{kw}`"));
            }
        })
    }
}

pub fn parse(text: &str) -> Result<Vec<Block>> {
    let toks = lex(text)?;
    let nlines = text.lines().count();
    let end = (nlines.max(1), text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1));
    let mut p = Parser { toks, pos: 0, end };
    let mut out = Vec::new();
    while p.pos < p.toks.len() {
        out.push(p.block()?);
    }
    Ok(out)
}

/// Parses one signature block, or a bare body such as `sorts: s;`.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let toks = lex(text)?;
    let bare = !matches!(toks.first(), Some(Token { tok: Tok::Ident(k), .. }) if k == "signature");
    let blocks = if bare {
        parse(&format!("signature Anon {{\n{text}\n}}")).map_err(|e| match e {
            Error::Syntax { line, col, msg } => Error::Syntax { line: line.saturating_sub(1).max(1), col, msg },
            e => e,
        })?
    } else {
        parse(text)?
    };
    match blocks.as_slice() {
        [Block::Signature(s)] => Ok(s.clone()),
        _ => Err(Error::Invalid("expected exactly one signature block".into())),
    }
}

fn join(items: impl IntoIterator<Item = String>, sep: &str) -> String {
    items.into_iter().collect::<Vec<_>>().join(sep)
}

pub fn print_signature(s: &Signature) -> String {
    let mut out = format!("signature {} {{\n  sorts: {} ;\n", s.name, s.sorts.join(" "));
    for op in &s.ops {
        let ins = join(op.inputs.iter().map(|&i| s.sorts[i].clone()), " ");
        let ins = if ins.is_empty() { String::new() } else { format!("{ins} ") };
        let _ = writeln!(out, "  op {} : {}-> {} ;", op.symbol, ins, s.sorts[op.output]);
    }
    out.push_str("}\n");
    out
}

pub fn print_identity(i: &Identity) -> String {
    format!(
        "identity {} ({}) : {} = {}\n",
        i.name,
        join(i.vars.iter().map(|(v, s)| format!("{v}:{s}")), ", "),
        i.lhs,
        i.rhs
    )
}

fn print_term(t: &Term) -> String {
    t.to_string()
}

fn print_hom(h: &HomDecl) -> String {
    format!("{} [{}]", h.target, join(h.images.iter().map(|v| v.join(", ")), " | "))
}

fn print_bracket(kw: &str, r: &BracketRow) -> String {
    format!("  {kw} {} ({}, {}) = {} ;\n", r.0, r.1, r.2, r.3)
}

pub fn print_block(b: &Block) -> String {
    match b {
        Block::Signature(s) => print_signature(s),
        Block::Identity(i) => print_identity(i),
        Block::Variety(v) => format!(
            "variety {} {{\n  signature: {} ;\n  identities: [{}] ;\n  generators: [{}]\n}}\n",
            v.name,
            v.signature,
            v.identities.join(", "),
            v.generators.join(", ")
        ),
        Block::Algebra(a) => {
            let mut items: Vec<String> = a
                .carriers
                .iter()
                .map(|(s, els)| format!("  carrier {s} = {{{}}}", els.join(", ")))
                .collect();
            items.extend(a.tables.iter().map(|(o, es)| format!("  table {o} = [{}]", es.join(", "))));
            if let Some(g) = &a.generators {
                items.push(format!("  generators = {{{}}}", g.join(", ")));
            }
            format!("algebra {} of {} {{\n{}\n}}\n", a.name, a.signature, items.join(" ;\n"))
        }
        Block::Coalgebra(c) => {
            let mut out = format!("coalgebra {} {{\n  variety: {} in {} ;\n", c.name, c.variety, c.ambient);
            for (s, a) in &c.components {
                let _ = writeln!(out, "  component {s} = {a} ;");
            }
            for (op, imgs) in &c.coops {
                let _ = writeln!(
                    out,
                    "  coop {op} = [{}] ;",
                    join(imgs.iter().map(|(y, t)| format!("{y} -> {}", print_term(t))), ", ")
                );
            }
            out.push_str("}\n");
            out
        }
        Block::Filtration(f) => {
            let mut out = format!("filtration {} on {} {{\n", f.name, f.base);
            for (l, h) in &f.stages {
                let _ = writeln!(out, "  stage {l} : {} ;", print_hom(h));
            }
            for (l, m, h) in &f.leqs {
                let _ = writeln!(out, "  leq {l} {m} via {} ;", print_hom(h));
            }
            out.push_str("}\n");
            out
        }
        Block::Monoid(m) => {
            let mut out = format!("monoid {} {{\n  object: {} ;\n", m.name, m.object);
            for r in &m.mu {
                out.push_str(&print_bracket("mu", r));
            }
            for (i, v) in &m.eta {
                let _ = writeln!(out, "  eta {i} = {v} ;");
            }
            out.push_str("}\n");
            out
        }
        Block::Module(m) => {
            let mut out = format!("module {} {{\n  monoid: {} ;\n  object: {} ;\n", m.name, m.monoid, m.object);
            for r in &m.rho {
                out.push_str(&print_bracket("rho", r));
            }
            out.push_str("}\n");
            out
        }
    }
}

pub fn print(blocks: &[Block]) -> String {
    join(blocks.iter().map(print_block), "\n")
}
