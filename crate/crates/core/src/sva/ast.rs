// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// Where an assertion came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Llm,
    Reference,
    #[default]
    Manual,
}

/// One named property together with its `assert property` directive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AssertionAst {
    pub name: String,
    /// Signal whose rising edge clocks the property.
    pub clock: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disable: Option<BoolExpr>,
    pub body: PropertyExpr,
    #[serde(default)]
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<GenerateBinding>,
}

impl AssertionAst {
    /// Equality of the checked behaviour, ignoring name and origin.
    pub fn same_property(&self, other: &AssertionAst) -> bool {
        self.clock == other.clock
            && self.disable == other.disable
            && self.body == other.body
            && self.generate == other.generate
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    /// All signal identifiers referenced by the property (clock excluded),
    /// deduplicated in first-occurrence order.
    pub fn signal_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |e: &BoolExpr| {
            e.visit_idents(&mut |name, _| {
                if !out.iter().any(|n| n == name) {
                    out.push(name.to_string());
                }
            })
        };
        if let Some(d) = &self.disable {
            push(d);
        }
        for e in self.body.exprs() {
            push(e);
        }
        out
    }

    /// Index variables used anywhere in the property.
    pub fn index_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |e: &BoolExpr| {
            e.visit_idents(&mut |_, idx| {
                if let Some(Index::Var(v)) = idx {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            })
        };
        if let Some(d) = &self.disable {
            push(d);
        }
        for e in self.body.exprs() {
            push(e);
        }
        out
    }
}

/// `for (genvar <loop_var> = <lower>; <loop_var> < <upper>; ...)` wrapper.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenerateBinding {
    pub loop_var: String,
    pub lower: i64,
    pub upper: LoopBound,
}

/// Exclusive loop bound: a literal or a module parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopBound {
    Lit(i64),
    Param(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicationKind {
    /// `|->`
    Overlapping,
    /// `|=>`
    NonOverlapping,
}

impl ImplicationKind {
    pub fn symbol(self) -> &'static str {
        match self {
            ImplicationKind::Overlapping => "|->",
            ImplicationKind::NonOverlapping => "|=>",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertyExpr {
    Seq { seq: SequenceExpr },
    Implication {
        antecedent: SequenceExpr,
        op: ImplicationKind,
        consequent: SequenceExpr,
    },
}

impl PropertyExpr {
    pub fn exprs(&self) -> impl Iterator<Item = &BoolExpr> {
        let (a, b): (&SequenceExpr, Option<&SequenceExpr>) = match self {
            PropertyExpr::Seq { seq } => (seq, None),
            PropertyExpr::Implication { antecedent, consequent, .. } => (antecedent, Some(consequent)),
        };
        a.elements.iter().chain(b.into_iter().flat_map(|s| s.elements.iter()))
    }

    pub fn exprs_mut(&mut self) -> Vec<&mut BoolExpr> {
        match self {
            PropertyExpr::Seq { seq } => seq.elements.iter_mut().collect(),
            PropertyExpr::Implication { antecedent, consequent, .. } => antecedent
                .elements
                .iter_mut()
                .chain(consequent.elements.iter_mut())
                .collect(),
        }
    }
}

/// Cycle delay `##n` (lo == hi) or `##[lo:hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DelayRange {
    pub lo: u32,
    pub hi: u32,
}

impl DelayRange {
    pub fn fixed(n: u32) -> Self {
        DelayRange { lo: n, hi: n }
    }

    pub fn plus(self, other: DelayRange) -> Self {
        DelayRange { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }
}

/// Boolean steps separated by cycle delays: `[##lead] e0 ##d1 e1 ... ##dn en`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequenceExpr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lead: Option<DelayRange>,
    pub elements: Vec<BoolExpr>,
    /// `delays[i]` separates `elements[i]` and `elements[i + 1]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delays: Vec<DelayRange>,
}

impl SequenceExpr {
    pub fn single(e: BoolExpr) -> Self {
        SequenceExpr { lead: None, elements: vec![e], delays: vec![] }
    }

    /// Largest number of cycles between the sequence start and its last element.
    pub fn max_span(&self) -> u32 {
        self.lead.map_or(0, |d| d.hi) + self.delays.iter().map(|d| d.hi).sum::<u32>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Index {
    Lit(i64),
    Var(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithOp {
    Add,
    Sub,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoolExpr {
    Ident {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<Index>,
    },
    Int { value: i64 },
    /// Quoted symbolic state name such as `'Invalid'`; it has no encoding in
    /// a trace and always samples as unknown.
    Label { text: String },
    Not { expr: Box<BoolExpr> },
    And { lhs: Box<BoolExpr>, rhs: Box<BoolExpr> },
    Or { lhs: Box<BoolExpr>, rhs: Box<BoolExpr> },
    Cmp { op: CmpOp, lhs: Box<BoolExpr>, rhs: Box<BoolExpr> },
    Arith { op: ArithOp, lhs: Box<BoolExpr>, rhs: Box<BoolExpr> },
    /// `$past(expr)` has `depth: None`; normalization makes it `Some(1)`.
    Past {
        expr: Box<BoolExpr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<u32>,
    },
    Rose { expr: Box<BoolExpr> },
    Fell { expr: Box<BoolExpr> },
    Stable { expr: Box<BoolExpr> },
}

impl BoolExpr {
    pub fn ident(name: &str) -> Self {
        BoolExpr::Ident { name: name.to_string(), index: None }
    }

    pub fn int(value: i64) -> Self {
        BoolExpr::Int { value }
    }

    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not { expr: Box::new(e) }
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And { lhs: Box::new(a), rhs: Box::new(b) }
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or { lhs: Box::new(a), rhs: Box::new(b) }
    }

    pub fn cmp(op: CmpOp, a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Cmp { op, lhs: Box::new(a), rhs: Box::new(b) }
    }

    pub fn arith(op: ArithOp, a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Arith { op, lhs: Box::new(a), rhs: Box::new(b) }
    }

    pub fn past(e: BoolExpr, depth: Option<u32>) -> Self {
        BoolExpr::Past { expr: Box::new(e), depth }
    }

    pub fn children(&self) -> Vec<&BoolExpr> {
        match self {
            BoolExpr::Ident { .. } | BoolExpr::Int { .. } | BoolExpr::Label { .. } => vec![],
            BoolExpr::Not { expr }
            | BoolExpr::Past { expr, .. }
            | BoolExpr::Rose { expr }
            | BoolExpr::Fell { expr }
            | BoolExpr::Stable { expr } => vec![expr],
            BoolExpr::And { lhs, rhs }
            | BoolExpr::Or { lhs, rhs }
            | BoolExpr::Cmp { lhs, rhs, .. }
            | BoolExpr::Arith { lhs, rhs, .. } => vec![lhs, rhs],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut BoolExpr> {
        match self {
            BoolExpr::Ident { .. } | BoolExpr::Int { .. } | BoolExpr::Label { .. } => vec![],
            BoolExpr::Not { expr }
            | BoolExpr::Past { expr, .. }
            | BoolExpr::Rose { expr }
            | BoolExpr::Fell { expr }
            | BoolExpr::Stable { expr } => vec![expr],
            BoolExpr::And { lhs, rhs }
            | BoolExpr::Or { lhs, rhs }
            | BoolExpr::Cmp { lhs, rhs, .. }
            | BoolExpr::Arith { lhs, rhs, .. } => vec![lhs, rhs],
        }
    }

    pub fn visit_idents<'a>(&'a self, f: &mut dyn FnMut(&'a str, Option<&'a Index>)) {
        if let BoolExpr::Ident { name, index } = self {
            f(name, index.as_ref());
        }
        for c in self.children() {
            c.visit_idents(f);
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Deepest `$past` look-back along any path.
    pub fn history_depth(&self) -> u32 {
        let own = match self {
            BoolExpr::Past { depth, .. } => depth.unwrap_or(1),
            BoolExpr::Rose { .. } | BoolExpr::Fell { .. } | BoolExpr::Stable { .. } => 1,
            _ => 0,
        };
        own + self.children().iter().map(|c| c.history_depth()).max().unwrap_or(0)
    }
}
