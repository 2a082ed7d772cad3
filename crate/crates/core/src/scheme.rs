//! Argumentation schemes as patterns of sentential forms.
//!
//! A [`Scheme`] is a list of premise forms, a single conclusion form and a
//! list of critical questions. Forms are text templates with `{Name}` slots
//! for schematic variables. Instantiating a scheme with a total
//! [`Substitution`] yields an [`ArgumentInstance`] whose statements carry
//! Toulmin roles (data, warrant, qualifier, claim).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Upper bound on the number of candidate substitutions collected when a
/// match turns out to be ambiguous.
const MAX_MATCH_CANDIDATES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("malformed form at byte {offset}: {reason}")]
    MalformedForm { offset: usize, reason: String },
    #[error("ambiguous match: {} candidate substitutions", candidates.len())]
    Ambiguous { candidates: Vec<Substitution> },
    #[error("variable {variable} bound to both {left:?} and {right:?}")]
    Conflict {
        variable: Variable,
        left: String,
        right: String,
    },
    #[error("incomplete substitution: unbound {}", join_vars(missing))]
    IncompleteSubstitution { missing: Vec<Variable> },
    #[error("unknown variable {variable} for scheme {scheme}")]
    UnknownVariable { scheme: String, variable: Variable },
    #[error("invalid ground term for {variable}: {reason}")]
    InvalidTerm { variable: Variable, reason: String },
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("qualifier {requested} exceeds scheme default {default} or is not adjustable for class {class}")]
    QualifierNotAdjustable {
        requested: Qualifier,
        default: Qualifier,
        class: SchemeClass,
    },
}

fn join_vars(vars: &[Variable]) -> String {
    vars.iter().map(Variable::as_str).collect::<Vec<_>>().join(", ")
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Normalizes text to Unicode composed form.
pub fn normalize(text: &str) -> String {
    text.nfc().collect()
}

/// Name of a schematic variable, e.g. `P`, `A`, `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self, SchemeError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Variable(name))
        } else {
            Err(SchemeError::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Variable {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variable::new(s)
    }
}

/// Role a form plays in a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Data,
    Warrant,
    SpecificPremise,
    GeneralPremise,
    MajorPremise,
    MinorPremise,
    Premise,
    Conclusion,
    Claim,
}

impl Role {
    pub const ALL: [Role; 9] = [
        Role::Data,
        Role::Warrant,
        Role::SpecificPremise,
        Role::GeneralPremise,
        Role::MajorPremise,
        Role::MinorPremise,
        Role::Premise,
        Role::Conclusion,
        Role::Claim,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Data => "data",
            Role::Warrant => "warrant",
            Role::SpecificPremise => "specific-premise",
            Role::GeneralPremise => "general-premise",
            Role::MajorPremise => "major-premise",
            Role::MinorPremise => "minor-premise",
            Role::Premise => "premise",
            Role::Conclusion => "conclusion",
            Role::Claim => "claim",
        }
    }

    pub fn is_conclusion(self) -> bool {
        matches!(self, Role::Conclusion | Role::Claim)
    }

    /// Premise roles that state the rule licensing the inference.
    pub fn is_warrant_like(self) -> bool {
        matches!(
            self,
            Role::Warrant | Role::GeneralPremise | Role::MajorPremise
        )
    }

    /// Premise roles that state the particular case.
    pub fn is_data_like(self) -> bool {
        matches!(
            self,
            Role::Data | Role::SpecificPremise | Role::MinorPremise | Role::Premise
        )
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

/// Modal strength of a claim. Ordered weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Qualifier {
    Plausible,
    Presumable,
    Probable,
    Certain,
}

impl Qualifier {
    pub const ALL: [Qualifier; 4] = [
        Qualifier::Plausible,
        Qualifier::Presumable,
        Qualifier::Probable,
        Qualifier::Certain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Qualifier::Certain => "certain",
            Qualifier::Probable => "probable",
            Qualifier::Presumable => "presumable",
            Qualifier::Plausible => "plausible",
        }
    }

    /// One lattice step down, saturating at `plausible`.
    pub fn weaker(self) -> Qualifier {
        match self {
            Qualifier::Certain => Qualifier::Probable,
            Qualifier::Probable => Qualifier::Presumable,
            Qualifier::Presumable | Qualifier::Plausible => Qualifier::Plausible,
        }
    }

    /// Adverb used when rendering a Toulmin layout.
    pub fn adverb(self) -> &'static str {
        match self {
            Qualifier::Certain => "certainly",
            Qualifier::Probable => "probably",
            Qualifier::Presumable => "presumably",
            Qualifier::Plausible => "plausibly",
        }
    }
}

impl fmt::Display for Qualifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Qualifier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Qualifier::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| format!("unknown qualifier `{s}`"))
    }
}

/// A-schemes are derivation rules, B-schemes mathematical macros over
/// derivations, C-schemes need not be deductive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SchemeClass {
    A,
    B,
    C,
}

impl SchemeClass {
    pub fn is_deductive(self) -> bool {
        matches!(self, SchemeClass::A | SchemeClass::B)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeClass::A => "A",
            SchemeClass::B => "B",
            SchemeClass::C => "C",
        }
    }
}

impl fmt::Display for SchemeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(SchemeClass::A),
            "B" => Ok(SchemeClass::B),
            "C" => Ok(SchemeClass::C),
            _ => Err(format!("unknown scheme class `{s}`")),
        }
    }
}

/// How a critical question attacks an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CqKind {
    BackingChallenge,
    PremiseChallenge,
    Rebut,
    Undercut,
    QualifierChallenge,
}

impl CqKind {
    pub const ALL: [CqKind; 5] = [
        CqKind::BackingChallenge,
        CqKind::PremiseChallenge,
        CqKind::Rebut,
        CqKind::Undercut,
        CqKind::QualifierChallenge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CqKind::BackingChallenge => "backing-challenge",
            CqKind::PremiseChallenge => "premise-challenge",
            CqKind::Rebut => "rebut",
            CqKind::Undercut => "undercut",
            CqKind::QualifierChallenge => "qualifier-challenge",
        }
    }
}

impl fmt::Display for CqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CqKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CqKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown critical question kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Text(String),
    Slot(Variable),
}

/// A parsed template: literal text runs interleaved with variable slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    source: String,
    segments: Vec<Segment>,
    variables: BTreeSet<Variable>,
}

/// Parses `{Name}` slots out of a template. The text is normalized to
/// composed form first.
pub fn parse_form(template: &str) -> Result<Template, SchemeError> {
    Template::parse(template)
}

impl Template {
    pub fn parse(template: &str) -> Result<Self, SchemeError> {
        let source = normalize(template);
        if source.is_empty() {
            return Err(SchemeError::MalformedForm {
                offset: 0,
                reason: "empty template".into(),
            });
        }
        let mut segments = Vec::new();
        let mut variables = BTreeSet::new();
        let mut text = String::new();
        let mut rest = source.char_indices().peekable();
        while let Some((offset, c)) = rest.next() {
            match c {
                '{' => {
                    let mut name = String::new();
                    let mut closed = false;
                    for (_, c) in rest.by_ref() {
                        if c == '}' {
                            closed = true;
                            break;
                        }
                        if c == '{' {
                            break;
                        }
                        name.push(c);
                    }
                    if !closed {
                        return Err(SchemeError::MalformedForm {
                            offset,
                            reason: "unbalanced `{`".into(),
                        });
                    }
                    if name.is_empty() {
                        return Err(SchemeError::MalformedForm {
                            offset,
                            reason: "empty slot `{}`".into(),
                        });
                    }
                    let var = Variable::new(name.clone()).map_err(|_| SchemeError::MalformedForm {
                        offset,
                        reason: format!("slot name {name:?} is not an identifier"),
                    })?;
                    if !text.is_empty() {
                        segments.push(Segment::Text(std::mem::take(&mut text)));
                    }
                    variables.insert(var.clone());
                    segments.push(Segment::Slot(var));
                }
                '}' => {
                    return Err(SchemeError::MalformedForm {
                        offset,
                        reason: "unbalanced `}`".into(),
                    })
                }
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            segments.push(Segment::Text(text));
        }
        Ok(Template {
            source,
            segments,
            variables,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn variables(&self) -> &BTreeSet<Variable> {
        &self.variables
    }

    pub fn has_slots(&self) -> bool {
        !self.variables.is_empty()
    }

    /// Replaces every slot using `f`.
    pub fn render_with(&self, mut f: impl FnMut(&Variable, &mut String)) -> String {
        let mut out = String::with_capacity(self.source.len());
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Slot(v) => f(v, &mut out),
            }
        }
        out
    }

    /// Renders with each slot shown as its bare variable name.
    pub fn render_schematic(&self) -> String {
        self.render_with(|v, out| out.push_str(v.as_str()))
    }

    /// Renders with a substitution; fails if any slot is unbound.
    pub fn instantiate(&self, sub: &Substitution) -> Result<String, SchemeError> {
        let missing: Vec<Variable> = self
            .variables
            .iter()
            .filter(|v| sub.get(v).is_none())
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(SchemeError::IncompleteSubstitution { missing });
        }
        Ok(self.render_with(|v, out| out.push_str(sub.get(v).unwrap_or_default())))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// A role-tagged template.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SententialForm {
    pub role: Role,
    pub template: Template,
}

impl SententialForm {
    pub fn new(role: Role, template: &str) -> Result<Self, SchemeError> {
        Ok(SententialForm {
            role,
            template: Template::parse(template)?,
        })
    }
}

/// Ground bindings for schematic variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Substitution {
    bindings: BTreeMap<Variable, String>,
}

/// True if `term` contains a `{Name}` slot.
fn contains_slot(term: &str) -> bool {
    let mut rest = term;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        if let Some(close) = after.find('}') {
            if is_identifier(&after[..close]) {
                return true;
            }
        }
        rest = after;
    }
    false
}

fn check_term(var: &Variable, term: &str) -> Result<(), SchemeError> {
    if term.is_empty() {
        return Err(SchemeError::InvalidTerm {
            variable: var.clone(),
            reason: "empty term".into(),
        });
    }
    if contains_slot(term) {
        return Err(SchemeError::InvalidTerm {
            variable: var.clone(),
            reason: "term contains a variable slot".into(),
        });
    }
    Ok(())
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a substitution from `(name, term)` pairs.
    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self, SchemeError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut sub = Substitution::new();
        for (k, v) in pairs {
            sub.bind(Variable::new(k.as_ref())?, v.as_ref())?;
        }
        Ok(sub)
    }

    /// Adds a binding. Rebinding a variable to the same term is a no-op;
    /// a different term is a conflict.
    pub fn bind(&mut self, var: Variable, term: &str) -> Result<(), SchemeError> {
        let term = normalize(term);
        check_term(&var, &term)?;
        match self.bindings.get(&var) {
            Some(existing) if *existing == term => Ok(()),
            Some(existing) => Err(SchemeError::Conflict {
                variable: var,
                left: existing.clone(),
                right: term,
            }),
            None => {
                self.bindings.insert(var, term);
                Ok(())
            }
        }
    }

    pub fn get(&self, var: &Variable) -> Option<&str> {
        self.bindings.get(var).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &str)> {
        self.bindings.iter().map(|(k, v)| (k, v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.bindings.keys()
    }
}

/// Union of two substitutions; fails on the first variable bound to
/// different terms.
pub fn merge_substitutions(
    left: &Substitution,
    right: &Substitution,
) -> Result<Substitution, SchemeError> {
    let mut merged = left.clone();
    for (var, term) in right.iter() {
        merged.bind(var.clone(), term)?;
    }
    Ok(merged)
}

/// Finds the substitution that turns `form` into `sentence`.
///
/// Returns `Ok(None)` when no substitution exists and an ambiguity error
/// when more than one does. Bindings are non-empty and must agree on
/// repeated variables.
pub fn match_form(form: &Template, sentence: &str) -> Result<Option<Substitution>, SchemeError> {
    let sentence = normalize(sentence);
    let mut found = Vec::new();
    let mut bindings = BTreeMap::new();
    match_segments(form.segments(), &sentence, &mut bindings, &mut found);
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        _ => Err(SchemeError::Ambiguous { candidates: found }),
    }
}

fn match_segments<'s>(
    segments: &[Segment],
    rest: &'s str,
    bindings: &mut BTreeMap<Variable, &'s str>,
    found: &mut Vec<Substitution>,
) {
    if found.len() >= MAX_MATCH_CANDIDATES {
        return;
    }
    let Some((first, tail)) = segments.split_first() else {
        if rest.is_empty() {
            let sub = Substitution {
                bindings: bindings
                    .iter()
                    .map(|(k, v)| (k.clone(), (*v).to_string()))
                    .collect(),
            };
            if !found.contains(&sub) {
                found.push(sub);
            }
        }
        return;
    };
    match first {
        Segment::Text(t) => {
            if let Some(after) = rest.strip_prefix(t.as_str()) {
                match_segments(tail, after, bindings, found);
            }
        }
        Segment::Slot(var) => {
            if let Some(bound) = bindings.get(var) {
                if let Some(after) = rest.strip_prefix(*bound) {
                    match_segments(tail, after, bindings, found);
                }
                return;
            }
            // The next literal run anchors where this slot may end.
            let anchor = match tail.first() {
                Some(Segment::Text(t)) => Some(t.as_str()),
                _ => None,
            };
            for (end, _) in rest.char_indices().skip(1).chain([(rest.len(), ' ')]) {
                let term = &rest[..end];
                let after = &rest[end..];
                if term.is_empty() {
                    continue;
                }
                if let Some(anchor) = anchor {
                    if !after.starts_with(anchor) {
                        continue;
                    }
                } else if tail.is_empty() && !after.is_empty() {
                    continue;
                }
                if contains_slot(term) {
                    continue;
                }
                bindings.insert(var.clone(), term);
                match_segments(tail, after, bindings, found);
                bindings.remove(var);
                if found.len() >= MAX_MATCH_CANDIDATES {
                    return;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CriticalQuestion {
    pub index: usize,
    pub kind: CqKind,
    pub template: Template,
}

impl CriticalQuestion {
    pub fn new(index: usize, kind: CqKind, template: &str) -> Result<Self, SchemeError> {
        Ok(CriticalQuestion {
            index,
            kind,
            template: Template::parse(template)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub id: String,
    pub name: String,
    pub class: SchemeClass,
    pub default_qualifier: Qualifier,
    /// Declared variables, in declaration order.
    pub variables: Vec<Variable>,
    pub premises: Vec<SententialForm>,
    pub conclusion: SententialForm,
    /// Conclusion indicator such as "Therefore". Rendered, never matched.
    pub indicator: Option<String>,
    pub cqs: Vec<CriticalQuestion>,
}

impl Scheme {
    /// All forms, premises first.
    pub fn forms(&self) -> impl Iterator<Item = &SententialForm> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    pub fn cq(&self, index: usize) -> Option<&CriticalQuestion> {
        self.cqs.iter().find(|cq| cq.index == index)
    }

    pub fn declares(&self, var: &Variable) -> bool {
        self.variables.contains(var)
    }

    /// Conclusion text with its indicator, slots shown by name.
    pub fn render_conclusion(&self) -> String {
        let body = self.conclusion.template.render_schematic();
        match &self.indicator {
            Some(ind) => format!("{ind}, {body}"),
            None => body,
        }
    }

    /// Equality ignoring `id` and `name`.
    pub fn same_structure(&self, other: &Scheme) -> bool {
        self.class == other.class
            && self.default_qualifier == other.default_qualifier
            && self.variables.iter().collect::<BTreeSet<_>>()
                == other.variables.iter().collect::<BTreeSet<_>>()
            && self.premises == other.premises
            && self.conclusion == other.conclusion
            && self.indicator == other.indicator
            && self.cqs == other.cqs
    }
}

/// One of the structural conditions a scheme must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// (i) a pattern of argument: at least one premise form.
    Pattern,
    /// (ii) forms are well parsed and only use declared variables.
    WellFormed,
    /// (iii) at least one form contains a variable slot.
    Schematic,
    /// (iv) exactly one conclusion form.
    SingleConclusion,
    /// Class A and B schemes carry a `certain` qualifier.
    QualifierConsistency,
    /// Critical questions are numbered 1..n.
    QuestionNumbering,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Pattern => "condition (i): at least one premise form",
            Condition::WellFormed => "condition (ii): well-formed sentential forms",
            Condition::Schematic => "condition (iii): at least one schematic variable slot",
            Condition::SingleConclusion => "condition (iv): exactly one conclusion form",
            Condition::QualifierConsistency => "class A/B schemes must be qualified `certain`",
            Condition::QuestionNumbering => "critical questions numbered consecutively from 1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub condition: Condition,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub scheme_id: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, condition: Condition) -> Option<&Check> {
        self.checks.iter().find(|c| c.condition == condition)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks a scheme against the structural conditions. Never fails;
/// problems are entries in the report.
pub fn validate_scheme(scheme: &Scheme) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |condition, problem: Option<String>| {
        checks.push(Check {
            condition,
            passed: problem.is_none(),
            detail: problem,
        })
    };

    push(
        Condition::Pattern,
        scheme
            .premises
            .is_empty()
            .then(|| "scheme has no premise forms".to_string()),
    );

    let mut problems = Vec::new();
    let mut seen = BTreeSet::new();
    for v in &scheme.variables {
        if !seen.insert(v) {
            problems.push(format!("variable {v} declared twice"));
        }
    }
    for form in scheme.forms() {
        for v in form.template.variables() {
            if !scheme.declares(v) {
                problems.push(format!("{} form uses undeclared variable {v}", form.role));
            }
        }
    }
    for form in &scheme.premises {
        if form.role.is_conclusion() {
            problems.push(format!("premise form has conclusion role {}", form.role));
        }
    }
    for cq in &scheme.cqs {
        for v in cq.template.variables() {
            if !scheme.declares(v) {
                problems.push(format!("CQ{} uses undeclared variable {v}", cq.index));
            }
        }
    }
    push(
        Condition::WellFormed,
        (!problems.is_empty()).then(|| problems.join("; ")),
    );

    push(
        Condition::Schematic,
        (!scheme.forms().any(|f| f.template.has_slots()))
            .then(|| "no form contains a variable slot".to_string()),
    );

    push(
        Condition::SingleConclusion,
        (!scheme.conclusion.role.is_conclusion()).then(|| {
            format!(
                "conclusion form has non-conclusion role {}",
                scheme.conclusion.role
            )
        }),
    );

    push(
        Condition::QualifierConsistency,
        (scheme.class.is_deductive() && scheme.default_qualifier != Qualifier::Certain).then(
            || {
                format!(
                    "class {} scheme has qualifier {}",
                    scheme.class, scheme.default_qualifier
                )
            },
        ),
    );

    let misnumbered: Vec<String> = scheme
        .cqs
        .iter()
        .enumerate()
        .filter(|(i, cq)| cq.index != i + 1)
        .map(|(i, cq)| format!("position {} has index {}", i + 1, cq.index))
        .collect();
    push(
        Condition::QuestionNumbering,
        (!misnumbered.is_empty()).then(|| misnumbered.join("; ")),
    );

    ValidationReport {
        scheme_id: scheme.id.clone(),
        checks,
    }
}

/// Identifier of an argument instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArgId(String);

impl ArgId {
    pub fn new(id: impl Into<String>) -> Self {
        ArgId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ArgId {
    fn from(s: &str) -> Self {
        ArgId(s.to_string())
    }
}

/// A ground sentence with the role of the form it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Statement {
    pub role: Role,
    pub text: String,
}

/// Toulmin view of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToulminLayout<'a> {
    pub data: Vec<&'a str>,
    pub warrant: Vec<&'a str>,
    pub qualifier: Qualifier,
    pub claim: &'a str,
}

/// A scheme applied to a total ground substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentInstance {
    pub id: ArgId,
    scheme: Arc<Scheme>,
    pub substitution: Substitution,
    pub premises: Vec<Statement>,
    pub conclusion: Statement,
    pub qualifier: Qualifier,
}

/// Instantiates every form of `scheme` with `sub`.
///
/// The substitution must bind every declared variable and nothing else.
pub fn instantiate_scheme(
    scheme: &Arc<Scheme>,
    id: impl Into<ArgId>,
    sub: Substitution,
) -> Result<ArgumentInstance, SchemeError> {
    if let Some(extra) = sub.variables().find(|v| !scheme.declares(v)) {
        return Err(SchemeError::UnknownVariable {
            scheme: scheme.id.clone(),
            variable: extra.clone(),
        });
    }
    let missing: Vec<Variable> = scheme
        .variables
        .iter()
        .filter(|v| sub.get(v).is_none())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(SchemeError::IncompleteSubstitution { missing });
    }
    let premises = scheme
        .premises
        .iter()
        .map(|f| {
            Ok(Statement {
                role: f.role,
                text: f.template.instantiate(&sub)?,
            })
        })
        .collect::<Result<Vec<_>, SchemeError>>()?;
    let conclusion = Statement {
        role: scheme.conclusion.role,
        text: scheme.conclusion.template.instantiate(&sub)?,
    };
    Ok(ArgumentInstance {
        id: id.into(),
        scheme: Arc::clone(scheme),
        substitution: sub,
        premises,
        conclusion,
        qualifier: scheme.default_qualifier,
    })
}

impl ArgumentInstance {
    pub fn scheme(&self) -> &Arc<Scheme> {
        &self.scheme
    }

    pub fn scheme_id(&self) -> &str {
        &self.scheme.id
    }

    pub fn claim(&self) -> &str {
        &self.conclusion.text
    }

    /// Premises then conclusion.
    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    /// Sets a per-instance qualifier. Only class C instances may vary,
    /// and never above the scheme default.
    pub fn with_qualifier(mut self, qualifier: Qualifier) -> Result<Self, SchemeError> {
        let scheme = &self.scheme;
        if scheme.class.is_deductive() && qualifier != Qualifier::Certain
            || qualifier > scheme.default_qualifier
        {
            return Err(SchemeError::QualifierNotAdjustable {
                requested: qualifier,
                default: scheme.default_qualifier,
                class: scheme.class,
            });
        }
        self.qualifier = qualifier;
        Ok(self)
    }

    /// Text of critical question `index` with this instance's bindings.
    pub fn cq_text(&self, index: usize) -> Option<String> {
        let cq = self.scheme.cq(index)?;
        cq.template.instantiate(&self.substitution).ok()
    }

    pub fn toulmin(&self) -> ToulminLayout<'_> {
        let mut data = Vec::new();
        let mut warrant = Vec::new();
        for p in &self.premises {
            if p.role.is_warrant_like() {
                warrant.push(p.text.as_str());
            } else {
                data.push(p.text.as_str());
            }
        }
        ToulminLayout {
            data,
            warrant,
            qualifier: self.qualifier,
            claim: &self.conclusion.text,
        }
    }
}
