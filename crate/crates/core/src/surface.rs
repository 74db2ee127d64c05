//! Presentations of non-compact orientable surfaces.
//!
//! A regular presentation is a finite rule system. Each rule names a block
//! kind and the rules glued onto its output circles.
//! The root block is glued onto an implicit disk. Unfolding the rules from
//! the root gives a locally finite tree of blocks whose union is the surface.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{self, Sccs};
use crate::num::Extended;

pub type Genus = Extended;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Annulus,
    Pants,
    Handle,
}

impl BlockKind {
    pub fn arity(self) -> usize {
        match self {
            BlockKind::Pants => 2,
            BlockKind::Annulus | BlockKind::Handle => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            BlockKind::Annulus => 'A',
            BlockKind::Pants => 'P',
            BlockKind::Handle => 'H',
        }
    }

    fn from_letter(s: &str) -> Option<BlockKind> {
        match s {
            "A" => Some(BlockKind::Annulus),
            "P" => Some(BlockKind::Pants),
            "H" => Some(BlockKind::Handle),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("rule `{0}` defined twice")]
    DuplicateRule(String),
    #[error("rule `{0}` is referenced but never defined")]
    DanglingRule(String),
    #[error("rule `{0}` is not reachable from the root")]
    UnreachableRule(String),
    #[error("finite-type data with b+p = 0 presents a compact surface")]
    CompactSurface,
    #[error("presentation is not of finite type")]
    NotFiniteType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub kind: BlockKind,
    pub children: Vec<usize>,
}

/// A validated rule system: arities match, indices resolve, all rules reachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSystem {
    rules: Vec<Rule>,
    root: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteType {
    pub genus: u64,
    pub boundary: u64,
    pub punctures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Regular(RuleSystem),
    FiniteType(FiniteType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePresentation {
    pub name: String,
    pub body: Body,
}

impl RuleSystem {
    /// Builds a rule system from `(name, kind, children)` triples.
    pub fn new(rules: Vec<Rule>, root: usize) -> Result<RuleSystem, SurfaceError> {
        let mut seen = BTreeMap::new();
        for r in &rules {
            if seen.insert(r.name.as_str(), ()).is_some() {
                return Err(SurfaceError::DuplicateRule(r.name.clone()));
            }
        }
        for r in &rules {
            if r.children.len() != r.kind.arity() {
                return Err(SurfaceError::Syntax {
                    line: 0,
                    col: 0,
                    message: format!(
                        "rule `{}` has {} children, {} expects {}",
                        r.name,
                        r.children.len(),
                        r.kind.letter(),
                        r.kind.arity()
                    ),
                });
            }
            if r.children.iter().any(|&c| c >= rules.len()) {
                return Err(SurfaceError::DanglingRule(r.name.clone()));
            }
        }
        if root >= rules.len() {
            return Err(SurfaceError::DanglingRule(String::from("root")));
        }
        let sys = RuleSystem { rules, root };
        let reach = graph::reachable(&sys.children(), &[root]);
        if let Some(i) = reach.iter().position(|r| !r) {
            return Err(SurfaceError::UnreachableRule(sys.rules[i].name.clone()));
        }
        Ok(sys)
    }

    /// Like [`RuleSystem::new`] but silently drops unreachable rules.
    pub fn pruned(rules: Vec<Rule>, root: usize) -> Result<RuleSystem, SurfaceError> {
        let children: Vec<Vec<usize>> = rules.iter().map(|r| r.children.clone()).collect();
        if root >= rules.len() || children.iter().flatten().any(|&c| c >= rules.len()) {
            return RuleSystem::new(rules, root);
        }
        let reach = graph::reachable(&children, &[root]);
        let mut remap = vec![usize::MAX; rules.len()];
        let mut kept = Vec::new();
        for (i, r) in rules.into_iter().enumerate() {
            if reach[i] {
                remap[i] = kept.len();
                kept.push(r);
            }
        }
        for r in &mut kept {
            for c in &mut r.children {
                *c = remap[*c];
            }
        }
        RuleSystem::new(kept, remap[root])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn kind(&self, s: usize) -> BlockKind {
        self.rules[s].kind
    }

    pub fn name(&self, s: usize) -> &str {
        &self.rules[s].name
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.name == name)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        self.rules.iter().map(|r| r.children.clone()).collect()
    }

    /// States lying on a cycle of the rule graph.
    pub fn cyclic_states(&self) -> Vec<bool> {
        let ch = self.children();
        let sccs = Sccs::new(&ch);
        (0..self.len())
            .map(|s| sccs.is_cyclic(&ch, sccs.comp_of[s]))
            .collect()
    }

    /// States on a cycle or reachable from one.
    pub fn after_cycle(&self) -> Vec<bool> {
        let cyc = self.cyclic_states();
        let starts: Vec<usize> = (0..self.len()).filter(|&s| cyc[s]).collect();
        graph::reachable(&self.children(), &starts)
    }

    /// Sum of `weight` over all nodes of the unfolding below `from`.
    pub fn weighted_total(&self, from: usize, weight: impl Fn(BlockKind) -> u64) -> Extended {
        let ch = self.children();
        let below = graph::reachable(&ch, &[from]);
        let after = self.after_cycle();
        if (0..self.len()).any(|s| below[s] && after[s] && weight(self.kind(s)) > 0) {
            return Extended::Infinite;
        }
        // The part below `from` that carries weight is acyclic; count paths.
        let mut memo: Vec<Option<Extended>> = vec![None; self.len()];
        fn total(
            sys: &RuleSystem,
            s: usize,
            after: &[bool],
            w: &dyn Fn(BlockKind) -> u64,
            memo: &mut Vec<Option<Extended>>,
        ) -> Extended {
            if after[s] {
                return Extended::ZERO;
            }
            if let Some(v) = memo[s] {
                return v;
            }
            let mut v = Extended::Finite(w(sys.kind(s)));
            for &c in &sys.rules[s].children {
                v = v + total(sys, c, after, w, memo);
            }
            memo[s] = Some(v);
            v
        }
        total(self, from, &after, &weight, &mut memo)
    }

    pub fn genus(&self) -> Genus {
        self.weighted_total(self.root, |k| u64::from(k == BlockKind::Handle))
    }

    pub fn is_finite_type(&self) -> bool {
        self.weighted_total(self.root, |k| u64::from(k != BlockKind::Annulus))
            .is_finite()
    }

    /// True when every block reachable from `s` is an annulus.
    pub fn pure_annulus(&self, s: usize) -> bool {
        let reach = graph::reachable(&self.children(), &[s]);
        (0..self.len()).all(|t| !reach[t] || self.kind(t) == BlockKind::Annulus)
    }

    /// Renumbers states in breadth-first order from the root. Two systems
    /// that differ only by rule names and rule order have equal shapes.
    pub fn shape(&self) -> Vec<(BlockKind, Vec<usize>)> {
        let mut order = vec![usize::MAX; self.len()];
        let mut seq = Vec::new();
        let mut q = VecDeque::from([self.root]);
        order[self.root] = 0;
        seq.push(self.root);
        while let Some(s) = q.pop_front() {
            for &c in &self.rules[s].children {
                if order[c] == usize::MAX {
                    order[c] = seq.len();
                    seq.push(c);
                    q.push_back(c);
                }
            }
        }
        seq.iter()
            .map(|&s| {
                let r = &self.rules[s];
                (r.kind, r.children.iter().map(|&c| order[c]).collect())
            })
            .collect()
    }

    /// Inserts a fresh annulus on the edge from `state` through child slot `slot`.
    pub fn splice_annulus(&self, state: usize, slot: usize) -> RuleSystem {
        let mut rules = self.rules.clone();
        let target = rules[state].children[slot];
        let name = fresh_name(&rules, "spliced");
        let idx = rules.len();
        rules.push(Rule {
            name,
            kind: BlockKind::Annulus,
            children: vec![target],
        });
        rules[state].children[slot] = idx;
        RuleSystem { rules, root: self.root }
    }

    /// Inserts a fresh annulus between the implicit disk and the root.
    pub fn splice_annulus_at_root(&self) -> RuleSystem {
        let mut rules = self.rules.clone();
        let name = fresh_name(&rules, "spliced");
        rules.push(Rule {
            name,
            kind: BlockKind::Annulus,
            children: vec![self.root],
        });
        let root = rules.len() - 1;
        RuleSystem { rules, root }
    }

    /// Standard presentation of S_{g,0,p}: a chain of `g` handles, then a
    /// caterpillar of `p-1` pants, then annulus tails.
    pub fn standard(genus: u64, ends: u64) -> Result<RuleSystem, SurfaceError> {
        if ends == 0 {
            return Err(SurfaceError::CompactSurface);
        }
        let mut rules = Vec::new();
        let tail = (genus + ends - 1) as usize;
        for i in 0..genus {
            rules.push(Rule {
                name: format!("h{}", i + 1),
                kind: BlockKind::Handle,
                children: vec![(i + 1) as usize],
            });
        }
        for j in 0..ends - 1 {
            let me = (genus + j) as usize;
            let next = if j + 1 < ends - 1 { me + 1 } else { tail };
            rules.push(Rule {
                name: format!("q{}", j + 1),
                kind: BlockKind::Pants,
                children: vec![next, tail],
            });
        }
        rules.push(Rule {
            name: String::from("e"),
            kind: BlockKind::Annulus,
            children: vec![tail],
        });
        RuleSystem::new(rules, 0)
    }
}

pub(crate) fn fresh_name(rules: &[Rule], stem: &str) -> String {
    let mut i = 0usize;
    loop {
        let cand = format!("{stem}{i}");
        if rules.iter().all(|r| r.name != cand) {
            return cand;
        }
        i += 1;
    }
}

impl SurfacePresentation {
    pub fn regular(name: impl Into<String>, sys: RuleSystem) -> SurfacePresentation {
        SurfacePresentation {
            name: name.into(),
            body: Body::Regular(sys),
        }
    }

    pub fn finite_type(
        name: impl Into<String>,
        genus: u64,
        boundary: u64,
        punctures: u64,
    ) -> Result<SurfacePresentation, SurfaceError> {
        if boundary + punctures == 0 {
            return Err(SurfaceError::CompactSurface);
        }
        Ok(SurfacePresentation {
            name: name.into(),
            body: Body::FiniteType(FiniteType {
                genus,
                boundary,
                punctures,
            }),
        })
    }

    /// The rule system of the presentation; finite-type data is expanded
    /// into its standard presentation.
    pub fn rule_system(&self) -> RuleSystem {
        match &self.body {
            Body::Regular(sys) => sys.clone(),
            Body::FiniteType(ft) => RuleSystem::standard(ft.genus, ft.boundary + ft.punctures)
                .expect("finite-type data validated at construction"),
        }
    }

    pub fn genus(&self) -> Genus {
        match &self.body {
            Body::Regular(sys) => sys.genus(),
            Body::FiniteType(ft) => Extended::Finite(ft.genus),
        }
    }

    pub fn is_finite_type(&self) -> bool {
        match &self.body {
            Body::Regular(sys) => sys.is_finite_type(),
            Body::FiniteType(_) => true,
        }
    }

    /// The normal form (g, 0, p) of a finite-type surface.
    pub fn canonical_finite_type(&self) -> Result<(u64, u64, u64), SurfaceError> {
        match &self.body {
            Body::FiniteType(ft) => Ok((ft.genus, 0, ft.boundary + ft.punctures)),
            Body::Regular(sys) => {
                if !sys.is_finite_type() {
                    return Err(SurfaceError::NotFiniteType);
                }
                let g = sys.genus().finite().ok_or(SurfaceError::NotFiniteType)?;
                let ends = finite_type_ends(sys);
                Ok((g, 0, ends))
            }
        }
    }
}

/// Number of ends of a finite-type system: each entry into an annulus cycle
/// is one puncture.
fn finite_type_ends(sys: &RuleSystem) -> u64 {
    let cyc = sys.cyclic_states();
    let mut memo = vec![None; sys.len()];
    fn go(sys: &RuleSystem, s: usize, cyc: &[bool], memo: &mut Vec<Option<u64>>) -> u64 {
        if cyc[s] {
            return 1;
        }
        if let Some(v) = memo[s] {
            return v;
        }
        let v = sys.rules[s]
            .children
            .iter()
            .map(|&c| go(sys, c, cyc, memo))
            .fold(0u64, u64::saturating_add);
        memo[s] = Some(v);
        v
    }
    go(sys, sys.root, &cyc, &mut memo)
}

impl fmt::Display for SurfacePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::FiniteType(ft) => write!(
                f,
                "surface {} finite S(g={}, b={}, p={})",
                self.name, ft.genus, ft.boundary, ft.punctures
            ),
            Body::Regular(sys) => {
                write!(f, "surface {} {{ ", self.name)?;
                let order = core::iter::once(sys.root).chain((0..sys.len()).filter(|&s| s != sys.root));
                for (i, s) in order.enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    let r = &sys.rules[s];
                    write!(f, "{} = {}(", r.name, r.kind.letter())?;
                    for (j, &c) in r.children.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        f.write_str(&sys.rules[c].name)?;
                    }
                    f.write_str(")")?;
                }
                f.write_str(" }")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
}

struct Lexer<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, message: impl Into<String>) -> SurfaceError {
        SurfaceError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, SurfaceError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.col);
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_ascii_digit() {
                let mut n: u64 = 0;
                while let Some(&d) = self.chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(u64::from(v)))
                        .ok_or_else(|| self.err("number too large"))?;
                    self.bump();
                }
                if matches!(self.chars.peek(), Some(c) if c.is_alphabetic() || *c == '_') {
                    return Err(self.err("identifiers cannot start with a digit"));
                }
                out.push((Tok::Num(n), line, col));
            } else if c.is_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), line, col));
            } else if "{}();,=".contains(c) {
                self.bump();
                out.push((Tok::Sym(c), line, col));
            } else {
                return Err(self.err(format!("unexpected character `{c}`")));
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> SurfaceError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end);
        SurfaceError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn ident(&mut self) -> Result<String, SurfaceError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SurfaceError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{kw}`"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), SurfaceError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn num(&mut self) -> Result<u64, SurfaceError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected number")),
        }
    }

    fn field(&mut self, name: &str) -> Result<u64, SurfaceError> {
        self.keyword(name)?;
        self.sym('=')?;
        self.num()
    }
}

/// Parses the presentation grammar.
pub fn parse_presentation(text: &str) -> Result<SurfacePresentation, SurfaceError> {
    let lexer = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let toks = lexer.tokens()?;
    let end = toks.last().map(|t| (t.1, t.2 + 1)).unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, end };
    p.keyword("surface")?;
    let name = p.ident()?;
    let pres = if p.peek() == Some(&Tok::Ident(String::from("finite"))) {
        p.pos += 1;
        p.keyword("S")?;
        p.sym('(')?;
        let g = p.field("g")?;
        p.sym(',')?;
        let b = p.field("b")?;
        p.sym(',')?;
        let q = p.field("p")?;
        p.sym(')')?;
        SurfacePresentation::finite_type(name, g, b, q)?
    } else {
        p.sym('{')?;
        let sys = parse_rules(&mut p)?;
        p.sym('}')?;
        SurfacePresentation::regular(name, sys)
    };
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(pres)
}

fn parse_rules(p: &mut Parser) -> Result<RuleSystem, SurfaceError> {
    let mut raw: Vec<(String, BlockKind, Vec<String>)> = Vec::new();
    let mut root_directive: Option<String> = None;
    loop {
        let lhs = p.ident()?;
        p.sym('=')?;
        let head = p.ident()?;
        if p.peek() == Some(&Tok::Sym('(')) {
            let kind = BlockKind::from_letter(&head)
                .ok_or_else(|| p.err(format!("unknown block `{head}`, expected A, P or H")))?;
            p.sym('(')?;
            let mut kids = vec![p.ident()?];
            while p.peek() == Some(&Tok::Sym(',')) {
                p.pos += 1;
                kids.push(p.ident()?);
            }
            p.sym(')')?;
            if kids.len() != kind.arity() {
                return Err(p.err(format!(
                    "{} takes {} argument(s), got {}",
                    head,
                    kind.arity(),
                    kids.len()
                )));
            }
            raw.push((lhs, kind, kids));
        } else if lhs == "root" {
            if root_directive.is_some() {
                return Err(p.err("root named twice"));
            }
            root_directive = Some(head);
        } else {
            return Err(p.err("expected a block application"));
        }
        if p.peek() == Some(&Tok::Sym(';')) {
            p.pos += 1;
            if matches!(p.peek(), Some(Tok::Sym('}'))) {
                break;
            }
        } else {
            break;
        }
        if !matches!(p.peek_at(0), Some(Tok::Ident(_))) {
            break;
        }
    }
    if raw.is_empty() {
        return Err(p.err("no rules"));
    }
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (i, (n, _, _)) in raw.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(SurfaceError::DuplicateRule(n.clone()));
        }
    }
    let mut rules = Vec::with_capacity(raw.len());
    for (n, kind, kids) in raw {
        let children = kids
            .iter()
            .map(|k| index.get(k).copied().ok_or_else(|| SurfaceError::DanglingRule(k.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        rules.push(Rule {
            name: n,
            kind,
            children,
        });
    }
    let root = match root_directive {
        Some(r) => *index.get(&r).ok_or(SurfaceError::DanglingRule(r.to_string()))?,
        None => 0,
    };
    RuleSystem::new(rules, root)
}
