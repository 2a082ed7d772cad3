//! The scheme definition language.
//!
//! ```text
//! scheme "sign" name "Argument from Sign" class C qualifier presumable {
//!   var A B;
//!   premise specific-premise: "{A} (a finding) is true in this situation.";
//!   conclusion: "{B} is true in this situation.";
//!   cq 1 backing-challenge: "What is the strength of the correlation?";
//! }
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::lex::{quote, tokenize, Cursor, Token};
use super::Diagnostic;
use crate::library::is_scheme_id;
use crate::scheme::{
    validate_scheme, CqKind, CriticalQuestion, Qualifier, Role, Scheme, SchemeClass,
    SententialForm, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchemeDocument {
    pub source: String,
    /// Schemes that parsed and passed validation, in document order.
    pub schemes: Vec<Scheme>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SchemeDocument {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

pub fn parse_scheme_dsl(text: &str) -> SchemeDocument {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut schemes: Vec<Scheme> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.word() != Some("scheme") {
            diagnostics.push(t.diag(format!("expected `scheme`, found {}", t.describe())));
            i += 1;
            while i < tokens.len() && tokens[i].word() != Some("scheme") {
                i += 1;
            }
            continue;
        }
        let Some(open) = (i..tokens.len()).find(|&j| tokens[j].is_sym('{')) else {
            diagnostics.push(t.diag("scheme header has no `{`"));
            break;
        };
        let close = (open + 1..tokens.len()).find(|&j| tokens[j].is_sym('}'));
        if close.is_none() {
            diagnostics.push(tokens[open].diag("unclosed scheme block"));
        }
        let body_end = close.unwrap_or(tokens.len());
        let header = &tokens[i..open];
        let body = &tokens[open + 1..body_end];
        if let Some(s) = parse_block(header, body, &mut diagnostics) {
            if schemes.iter().any(|o| o.id == s.id) {
                diagnostics.push(t.diag(format!("duplicate id `{}`", s.id)));
            } else {
                schemes.push(s);
            }
        }
        i = body_end + 1;
    }
    diagnostics.sort_by_key(|d| (d.line, d.column));
    SchemeDocument {
        source: text.to_string(),
        schemes,
        diagnostics,
    }
}

struct Header {
    id: String,
    name: String,
    class: SchemeClass,
    qualifier: Qualifier,
}

fn parse_header(toks: &[Token]) -> Result<Header, Diagnostic> {
    let mut c = Cursor::new(toks);
    c.expect_keyword("scheme")?;
    let (id_tok, id) = c.expect_string("scheme id")?;
    if !is_scheme_id(id) {
        return Err(id_tok.diag(format!("invalid scheme id `{id}`")));
    }
    let mut name = id.to_string();
    if c.peek().and_then(Token::word) == Some("name") {
        c.next();
        name = c.expect_string("scheme name")?.1.to_string();
    }
    c.expect_keyword("class")?;
    let (_, class) = c.parse_word::<SchemeClass>("class A, B or C")?;
    c.expect_keyword("qualifier")?;
    let (_, qualifier) = c.parse_word::<Qualifier>("qualifier level")?;
    c.expect_end()?;
    Ok(Header {
        id: id.to_string(),
        name,
        class,
        qualifier,
    })
}

fn parse_block(header: &[Token], body: &[Token], diags: &mut Vec<Diagnostic>) -> Option<Scheme> {
    let start = &header[0];
    let h = match parse_header(header) {
        Ok(h) => h,
        Err(d) => {
            diags.push(d);
            return None;
        }
    };
    let before = diags.len();
    let mut variables: Option<Vec<Variable>> = None;
    let mut premises = Vec::new();
    let mut conclusion: Option<SententialForm> = None;
    let mut indicator = None;
    let mut cqs = Vec::new();

    let mut stmts: Vec<&[Token]> = body.split(|t| t.is_sym(';')).collect();
    if let Some(last) = stmts.pop() {
        if let Some(t) = last.first() {
            diags.push(t.diag("statement is missing its `;`"));
        }
    }
    for stmt in stmts.into_iter().filter(|s| !s.is_empty()) {
        let r = parse_statement(stmt, &mut variables, &mut premises, &mut conclusion, &mut indicator, &mut cqs);
        if let Err(d) = r {
            diags.push(d);
        }
    }
    if diags.len() > before {
        return None;
    }
    let Some(conclusion) = conclusion else {
        diags.push(start.diag(format!(
            "scheme `{}` has no conclusion: violates condition (iv): exactly one conclusion form",
            h.id
        )));
        return None;
    };
    let variables = variables.unwrap_or_else(|| {
        let mut seen = BTreeSet::new();
        let mut vars = Vec::new();
        for f in premises.iter().chain(std::iter::once(&conclusion)) {
            for seg in f.template.segments() {
                if let crate::scheme::Segment::Slot(v) = seg {
                    if seen.insert(v.clone()) {
                        vars.push(v.clone());
                    }
                }
            }
        }
        vars
    });
    let scheme = Scheme {
        id: h.id,
        name: h.name,
        class: h.class,
        default_qualifier: h.qualifier,
        variables,
        premises,
        conclusion,
        indicator,
        cqs,
    };
    let report = validate_scheme(&scheme);
    if report.passed() {
        Some(scheme)
    } else {
        for f in report.failures() {
            let detail = f.detail.as_deref().unwrap_or("failed");
            diags.push(start.diag(format!(
                "scheme `{}` violates {}: {detail}",
                scheme.id,
                f.condition.label()
            )));
        }
        None
    }
}

fn parse_statement(
    stmt: &[Token],
    variables: &mut Option<Vec<Variable>>,
    premises: &mut Vec<SententialForm>,
    conclusion: &mut Option<SententialForm>,
    indicator: &mut Option<String>,
    cqs: &mut Vec<CriticalQuestion>,
) -> Result<(), Diagnostic> {
    let mut c = Cursor::new(stmt);
    let head = c.expect_word("statement keyword")?;
    let template = |c: &mut Cursor, role: Role| -> Result<SententialForm, Diagnostic> {
        c.expect_sym(':')?;
        let (t, text) = c.expect_string("template string")?;
        c.expect_end()?;
        SententialForm::new(role, text).map_err(|e| t.diag(e.to_string()))
    };
    match head.word().unwrap_or_default() {
        "var" => {
            let vars = variables.get_or_insert_with(Vec::new);
            while let Some(t) = c.next() {
                let w = t
                    .word()
                    .ok_or_else(|| t.diag(format!("expected variable name, found {}", t.describe())))?;
                let v = Variable::new(w).map_err(|e| t.diag(e.to_string()))?;
                vars.push(v);
            }
        }
        "premise" => {
            let (t, role) = c.parse_word::<Role>("premise role")?;
            if role.is_conclusion() {
                return Err(t.diag(format!("`{role}` is a conclusion role")));
            }
            premises.push(template(&mut c, role)?);
        }
        "conclusion" => {
            let role = match c.peek() {
                Some(t) if t.word().is_some() => c.parse_word::<Role>("conclusion role")?.1,
                _ => Role::Conclusion,
            };
            if !role.is_conclusion() {
                return Err(head.diag(format!("`{role}` is not a conclusion role")));
            }
            let form = template(&mut c, role)?;
            if conclusion.is_some() {
                return Err(head.diag(
                    "second conclusion: violates condition (iv): exactly one conclusion form",
                ));
            }
            *conclusion = Some(form);
        }
        "indicator" => {
            let (t, text) = c.expect_string("indicator string")?;
            c.expect_end()?;
            if text.trim().is_empty() || indicator.is_some() {
                return Err(t.diag("indicator must be a single non-empty string"));
            }
            *indicator = Some(text.to_string());
        }
        "cq" => {
            let (_, index) = c.parse_word::<usize>("question number")?;
            let (_, kind) = c.parse_word::<CqKind>("question kind")?;
            c.expect_sym(':')?;
            let (t, text) = c.expect_string("question string")?;
            c.expect_end()?;
            cqs.push(CriticalQuestion::new(index, kind, text).map_err(|e| t.diag(e.to_string()))?);
        }
        other => return Err(head.diag(format!("unknown statement `{other}`"))),
    }
    Ok(())
}

/// Canonical DSL text for `scheme`.
pub fn serialize_scheme(scheme: &Scheme) -> String {
    let mut out = String::new();
    let _ = write!(out, "scheme {}", quote(&scheme.id));
    if scheme.name != scheme.id {
        let _ = write!(out, " name {}", quote(&scheme.name));
    }
    let _ = writeln!(
        out,
        " class {} qualifier {} {{",
        scheme.class, scheme.default_qualifier
    );
    out.push_str("  var");
    for v in &scheme.variables {
        out.push(' ');
        out.push_str(v.as_str());
    }
    out.push_str(";\n");
    for p in &scheme.premises {
        let _ = writeln!(out, "  premise {}: {};", p.role, quote(p.template.as_str()));
    }
    if let Some(ind) = &scheme.indicator {
        let _ = writeln!(out, "  indicator {};", quote(ind));
    }
    let role = match scheme.conclusion.role {
        Role::Conclusion => String::new(),
        r => format!(" {r}"),
    };
    let _ = writeln!(
        out,
        "  conclusion{role}: {};",
        quote(scheme.conclusion.template.as_str())
    );
    for cq in &scheme.cqs {
        let _ = writeln!(out, "  cq {} {}: {};", cq.index, cq.kind, quote(cq.template.as_str()));
    }
    out.push_str("}\n");
    out
}

/// Several schemes, separated by blank lines.
pub fn serialize_schemes<'a>(schemes: impl IntoIterator<Item = &'a Scheme>) -> String {
    schemes
        .into_iter()
        .map(serialize_scheme)
        .collect::<Vec<_>>()
        .join("\n")
}
