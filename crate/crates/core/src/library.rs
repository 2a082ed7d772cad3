//! Built-in schemes, the scheme registry and localization.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::scheme::{
    validate_scheme, Condition, CqKind, CriticalQuestion, Qualifier, Role, Scheme, SchemeClass,
    SententialForm, Template, ValidationReport, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown scheme `{0}`")]
    NotFound(String),
    #[error("scheme id `{0}` is already registered")]
    DuplicateId(String),
    #[error("invalid scheme id {0:?}")]
    InvalidId(String),
    #[error("scheme `{}` is not well formed: {}", .0.scheme_id, describe_failures(.0))]
    Invalid(ValidationReport),
    #[error("scheme `{id}` is class {class} but qualified `{qualifier}`; class A/B schemes are always `certain`")]
    Inconsistent {
        id: String,
        class: SchemeClass,
        qualifier: Qualifier,
    },
    #[error("invalid term map: {0}")]
    InvalidTermMap(String),
}

fn describe_failures(report: &ValidationReport) -> String {
    report
        .failures()
        .map(|c| c.condition.label())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Scheme ids: an ASCII letter or `_`, then letters, digits, `_` or `-`.
pub fn is_scheme_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Builtin,
    User,
}

/// Schemes by id. Lookups take `&self`; registration takes `&mut self`, so
/// a shared registry is wrapped in a lock by the caller.
#[derive(Debug, Clone, Default)]
pub struct SchemeRegistry {
    schemes: BTreeMap<String, (Arc<Scheme>, Provenance)>,
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A registry holding the six built-in schemes.
    pub fn with_builtins() -> Self {
        let mut reg = Self::default();
        for scheme in builtin_schemes() {
            reg.schemes
                .insert(scheme.id.clone(), (scheme, Provenance::Builtin));
        }
        reg
    }

    /// Adds a user scheme. Schemes failing conditions (i) to (iv) are refused.
    pub fn register(&mut self, scheme: Scheme) -> Result<Arc<Scheme>, RegistryError> {
        if !is_scheme_id(&scheme.id) {
            return Err(RegistryError::InvalidId(scheme.id));
        }
        if self.schemes.contains_key(&scheme.id) {
            return Err(RegistryError::DuplicateId(scheme.id));
        }
        let report = validate_scheme(&scheme);
        let structural = [
            Condition::Pattern,
            Condition::WellFormed,
            Condition::Schematic,
            Condition::SingleConclusion,
        ];
        if report
            .failures()
            .any(|c| structural.contains(&c.condition))
        {
            return Err(RegistryError::Invalid(report));
        }
        let scheme = Arc::new(scheme);
        self.schemes
            .insert(scheme.id.clone(), (Arc::clone(&scheme), Provenance::User));
        Ok(scheme)
    }

    pub fn lookup(&self, id: &str) -> Result<&Arc<Scheme>, RegistryError> {
        self.schemes
            .get(id)
            .map(|(s, _)| s)
            .ok_or_else(|| RegistryError::NotFound(id.to_string()))
    }

    pub fn provenance(&self, id: &str) -> Option<Provenance> {
        self.schemes.get(id).map(|(_, p)| *p)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.schemes.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.schemes.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<Scheme>> {
        self.schemes.values().map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.schemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemes.is_empty()
    }

    /// Localizes a registered scheme under a fresh id. The result is not
    /// registered.
    pub fn localize(
        &self,
        id: &str,
        map: &TermMap,
        new_id: &str,
    ) -> Result<Localized, RegistryError> {
        let scheme = self.lookup(id)?;
        if !is_scheme_id(new_id) {
            return Err(RegistryError::InvalidId(new_id.to_string()));
        }
        if self.contains(new_id) {
            return Err(RegistryError::DuplicateId(new_id.to_string()));
        }
        Ok(localize_scheme(scheme, map, new_id))
    }
}

/// Returns the stored class after checking it against the qualifier.
pub fn classify(scheme: &Scheme) -> Result<SchemeClass, RegistryError> {
    if scheme.class.is_deductive() && scheme.default_qualifier != Qualifier::Certain {
        return Err(RegistryError::Inconsistent {
            id: scheme.id.clone(),
            class: scheme.class,
            qualifier: scheme.default_qualifier,
        });
    }
    Ok(scheme.class)
}

struct Builtin<'a> {
    id: &'a str,
    name: &'a str,
    vars: &'a [&'a str],
    premises: &'a [(Role, &'a str)],
    indicator: Option<&'a str>,
    conclusion: (Role, &'a str),
    cqs: &'a [(CqKind, &'a str)],
}

impl Builtin<'_> {
    fn build(&self) -> Scheme {
        let form = |(role, text): (Role, &str)| {
            SententialForm::new(role, text).expect("built-in template parses")
        };
        Scheme {
            id: self.id.to_string(),
            name: self.name.to_string(),
            class: SchemeClass::C,
            default_qualifier: Qualifier::Presumable,
            variables: self
                .vars
                .iter()
                .map(|v| Variable::new(*v).expect("built-in variable"))
                .collect(),
            premises: self.premises.iter().copied().map(form).collect(),
            conclusion: form(self.conclusion),
            indicator: self.indicator.map(str::to_string),
            cqs: self
                .cqs
                .iter()
                .enumerate()
                .map(|(i, (kind, text))| {
                    CriticalQuestion::new(i + 1, *kind, text).expect("built-in question parses")
                })
                .collect(),
        }
    }
}

const ETHOTIC_MAJOR: &str = "If {x} is a person of good (bad) moral character, then what {x} says should be accepted as more plausible (rejected as less plausible).";
const ETHOTIC_CONCLUSION: &str =
    "what {a} says should be accepted as more plausible (rejected as less plausible).";
const WEIGHT_OF_PRESUMPTION: &str =
    "Is the weight of presumption claimed strongly enough warranted by the evidence given?";

const BUILTINS: [Builtin<'static>; 6] = [
    Builtin {
        id: "defeasible_modus_ponens",
        name: "Defeasible Modus Ponens",
        vars: &["P", "Q"],
        premises: &[
            (Role::Data, "{P}."),
            (Role::Warrant, "As a rule, if {P}, then {Q}."),
        ],
        indicator: Some("Therefore"),
        conclusion: (Role::Claim, "{Q}."),
        cqs: &[
            (
                CqKind::BackingChallenge,
                "What reason is there to accept that, as a rule, if {P}, then {Q}?",
            ),
            (
                CqKind::Undercut,
                "Is the present case an exception to the rule that if {P}, then {Q}?",
            ),
        ],
    },
    Builtin {
        id: "argument_from_sign",
        name: "Argument from Sign",
        vars: &["A", "B"],
        premises: &[
            (Role::SpecificPremise, "{A} (a finding) is true in this situation."),
            (
                Role::GeneralPremise,
                "{B} is generally indicated as true when its sign, {A}, is true.",
            ),
        ],
        indicator: None,
        conclusion: (Role::Conclusion, "{B} is true in this situation."),
        cqs: &[
            (
                CqKind::BackingChallenge,
                "What is the strength of the correlation of the sign with the event signified?",
            ),
            (
                CqKind::Rebut,
                "Are there other events that would more reliably account for the sign?",
            ),
        ],
    },
    Builtin {
        id: "argument_from_an_established_rule",
        name: "Argument from an Established Rule",
        vars: &["x", "a", "A"],
        premises: &[
            (
                Role::MajorPremise,
                "If carrying out types of actions including {A} is the established rule for {x}, then (unless the case is an exception), {x} must carry out {A}.",
            ),
            (
                Role::MinorPremise,
                "Carrying out types of actions including {A} is the established rule for {a}.",
            ),
        ],
        indicator: Some("Therefore"),
        conclusion: (Role::Conclusion, "{a} must carry out {A}."),
        cqs: &[
            (
                CqKind::PremiseChallenge,
                "Does the rule require carrying out types of actions that include {A} as an instance?",
            ),
            (
                CqKind::Rebut,
                "Are there other established rules that might conflict with or override this one?",
            ),
            (
                CqKind::Undercut,
                "Is this case an exceptional one, that is, could there be extenuating circumstances or an excuse for noncompliance?",
            ),
        ],
    },
    Builtin {
        id: "practical_inference",
        name: "Practical Inference",
        vars: &["G", "A"],
        premises: &[
            (Role::MajorPremise, "I have a goal {G}."),
            (
                Role::MinorPremise,
                "Carrying out this action {A} is a means to realise {G}.",
            ),
        ],
        indicator: Some("Therefore"),
        conclusion: (
            Role::Conclusion,
            "I ought (practically speaking) to carry out this action {A}.",
        ),
        cqs: &[
            (
                CqKind::Rebut,
                "What other goals that I have that might conflict with {G} should be considered?",
            ),
            (
                CqKind::Undercut,
                "What alternative actions to my bringing about {A} that would also bring about {G} should be considered?",
            ),
            (
                CqKind::Undercut,
                "Among bringing about {A} and these alternative actions, which is arguably the most efficient?",
            ),
            (
                CqKind::PremiseChallenge,
                "What grounds are there for arguing it is practically possible for me to bring about {A}?",
            ),
            (
                CqKind::Rebut,
                "What consequences of my bringing about {A} should also be taken into account?",
            ),
        ],
    },
    Builtin {
        id: "ethotic",
        name: "Ethotic Argument",
        vars: &["x", "a"],
        premises: &[
            (Role::MajorPremise, ETHOTIC_MAJOR),
            (
                Role::MinorPremise,
                "{a} is a person of good (bad) moral character.",
            ),
        ],
        indicator: Some("Therefore"),
        conclusion: (Role::Conclusion, ETHOTIC_CONCLUSION),
        cqs: &[
            (
                CqKind::PremiseChallenge,
                "Is {a} a person of good (bad) moral character?",
            ),
            (CqKind::Undercut, "Is character relevant in the dialogue?"),
            (CqKind::QualifierChallenge, WEIGHT_OF_PRESUMPTION),
        ],
    },
    Builtin {
        id: "ethotic_mathematical",
        name: "Ethotic Mathematical Argument",
        vars: &["x", "a"],
        premises: &[
            (
                Role::MajorPremise,
                "If {x} is a person of good (bad) mathematical character, then what {x} says should be accepted as more plausible (rejected as less plausible).",
            ),
            (
                Role::MinorPremise,
                "{a} is a person of good (bad) mathematical character.",
            ),
        ],
        indicator: Some("Therefore"),
        conclusion: (Role::Conclusion, ETHOTIC_CONCLUSION),
        cqs: &[
            (
                CqKind::PremiseChallenge,
                "Is {a} a person of good (bad) mathematical character?",
            ),
            (
                CqKind::Undercut,
                "Is mathematical character relevant in the dialogue?",
            ),
            (CqKind::QualifierChallenge, WEIGHT_OF_PRESUMPTION),
        ],
    },
];

/// The six built-in schemes, in presentation order.
pub fn builtin_schemes() -> Vec<Arc<Scheme>> {
    static CELL: OnceLock<Vec<Arc<Scheme>>> = OnceLock::new();
    CELL.get_or_init(|| BUILTINS.iter().map(|b| Arc::new(b.build())).collect())
        .clone()
}

pub fn builtin(id: &str) -> Option<Arc<Scheme>> {
    builtin_schemes().into_iter().find(|s| s.id == id)
}

/// Source word → target word replacements for [`localize_scheme`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMap {
    entries: Vec<(String, String)>,
}

impl TermMap {
    pub fn new<I, K, V>(pairs: I) -> Result<Self, RegistryError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut entries = Vec::new();
        let mut keys = BTreeSet::new();
        for (k, v) in pairs {
            let (k, v) = (k.into(), v.into());
            if !is_word(&k) {
                return Err(RegistryError::InvalidTermMap(format!(
                    "source {k:?} is not a single word"
                )));
            }
            if v.is_empty() || v.chars().any(char::is_whitespace) {
                return Err(RegistryError::InvalidTermMap(format!(
                    "target {v:?} is not a single word"
                )));
            }
            if !keys.insert(k.to_lowercase()) {
                return Err(RegistryError::InvalidTermMap(format!(
                    "source {k:?} given twice"
                )));
            }
            entries.push((k, v));
        }
        if entries.is_empty() {
            return Err(RegistryError::InvalidTermMap("no replacements".into()));
        }
        Ok(TermMap { entries })
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

fn is_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(char::is_alphanumeric)
}

/// A localized scheme plus notes about map entries that had no effect.
#[derive(Debug, Clone)]
pub struct Localized {
    pub scheme: Scheme,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token<'a> {
    Word(&'a str),
    Gap(&'a str),
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut in_word = None;
    for (i, c) in text.char_indices() {
        let w = c.is_alphanumeric();
        match in_word {
            Some(prev) if prev != w => {
                out.push(if prev {
                    Token::Word(&text[start..i])
                } else {
                    Token::Gap(&text[start..i])
                });
                start = i;
            }
            _ => {}
        }
        in_word = Some(w);
    }
    if let Some(w) = in_word {
        out.push(if w {
            Token::Word(&text[start..])
        } else {
            Token::Gap(&text[start..])
        });
    }
    out
}

fn eq_ci(a: &str, b: &str) -> bool {
    a.to_lowercase() == b.to_lowercase()
}

/// Copies the case of `model`'s first letter onto `word`.
fn match_case(model: &str, word: &str) -> String {
    let upper = model.chars().next().is_some_and(char::is_uppercase);
    let mut chars = word.chars();
    match chars.next() {
        Some(first) if upper => first.to_uppercase().chain(chars).collect(),
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn lower_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

struct Rewriter<'m> {
    map: &'m TermMap,
    /// Per entry: the words that follow the source word somewhere in the
    /// scheme ("moral character" gives head "character").
    heads: Vec<BTreeSet<String>>,
}

impl<'m> Rewriter<'m> {
    fn new(map: &'m TermMap, texts: &[&str]) -> Self {
        let mut heads = vec![BTreeSet::new(); map.entries.len()];
        for text in texts {
            let tokens = tokenize(text);
            for (i, tok) in tokens.iter().enumerate() {
                let Token::Word(w) = tok else { continue };
                let Some(e) = map.entries.iter().position(|(k, _)| eq_ci(k, w)) else {
                    continue;
                };
                if let [Token::Gap(gap), Token::Word(next), ..] = &tokens[i + 1..] {
                    if gap.chars().all(char::is_whitespace) {
                        heads[e].insert(next.to_lowercase());
                    }
                }
            }
        }
        Rewriter { map, heads }
    }

    fn rewrite(&self, text: &str) -> String {
        let tokens = tokenize(text);
        let mut out = String::with_capacity(text.len());
        for (i, tok) in tokens.iter().enumerate() {
            let w = match tok {
                Token::Gap(g) => {
                    out.push_str(g);
                    continue;
                }
                Token::Word(w) => *w,
            };
            if let Some((k, v)) = self.map.entries.iter().find(|(k, _)| eq_ci(k, w)) {
                if eq_ci(k, v) {
                    out.push_str(w);
                } else {
                    out.push_str(&match_case(w, v));
                }
                continue;
            }
            // A bare head noun refers to the same qualified concept.
            let preceded_by = |key: &str| match i.checked_sub(2).map(|j| (&tokens[j], &tokens[j + 1])) {
                Some((Token::Word(prev), Token::Gap(gap))) => {
                    eq_ci(prev, key) && gap.chars().all(char::is_whitespace)
                }
                _ => false,
            };
            let head_of = self.map.entries.iter().zip(&self.heads).find(|((k, v), heads)| {
                !eq_ci(k, v) && heads.contains(&w.to_lowercase()) && !preceded_by(k)
            });
            match head_of {
                Some(((_, v), _)) => {
                    out.push_str(&match_case(w, v));
                    out.push(' ');
                    out.push_str(&lower_first(w));
                }
                None => out.push_str(w),
            }
        }
        out
    }
}

/// Replaces whole words of `map` throughout a scheme's forms and critical
/// questions.
///
/// Matching is case-insensitive and keeps the case of the first letter.
/// A word that follows a source word somewhere in the scheme is treated as
/// the head of a qualified phrase: where it appears bare, it gains the
/// target word too, so "moral character ... Is character relevant" becomes
/// "mathematical character ... Is mathematical character relevant".
/// Identity entries change nothing.
pub fn localize_scheme(scheme: &Scheme, map: &TermMap, new_id: &str) -> Localized {
    let mut texts: Vec<&str> = scheme.forms().map(|f| f.template.as_str()).collect();
    texts.extend(scheme.cqs.iter().map(|cq| cq.template.as_str()));

    let mut warnings = Vec::new();
    for (k, _) in &map.entries {
        let present = texts
            .iter()
            .any(|t| tokenize(t).iter().any(|tok| matches!(tok, Token::Word(w) if eq_ci(w, k))));
        if !present {
            warnings.push(format!(
                "`{k}` does not occur in scheme `{}`; nothing replaced",
                scheme.id
            ));
        }
    }

    let rw = Rewriter::new(map, &texts);
    let retemplate = |t: &Template| {
        Template::parse(&rw.rewrite(t.as_str())).expect("rewriting words keeps slots intact")
    };
    let form = |f: &SententialForm| SententialForm {
        role: f.role,
        template: retemplate(&f.template),
    };
    let localized = Scheme {
        id: new_id.to_string(),
        name: rw.rewrite(&scheme.name),
        class: scheme.class,
        default_qualifier: scheme.default_qualifier,
        variables: scheme.variables.clone(),
        premises: scheme.premises.iter().map(form).collect(),
        conclusion: form(&scheme.conclusion),
        indicator: scheme.indicator.clone(),
        cqs: scheme
            .cqs
            .iter()
            .map(|cq| CriticalQuestion {
                index: cq.index,
                kind: cq.kind,
                template: retemplate(&cq.template),
            })
            .collect(),
    };
    Localized {
        scheme: localized,
        warnings,
    }
}
