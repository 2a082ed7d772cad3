use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::labelling::{Framework, Label, BRUTE_FORCE_CAP};
use crate::scheme::{ArgId, ArgumentInstance, CqKind, Qualifier, Role, Scheme};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown argument `{0}`")]
    UnknownArgument(ArgId),
    #[error("argument `{0}` already exists")]
    DuplicateArgument(ArgId),
    #[error("argument `{arg}` has no critical question {index} (scheme has {count})")]
    InvalidCqIndex {
        arg: ArgId,
        index: usize,
        count: usize,
    },
    #[error("critical question {index} on `{arg}` was already posed")]
    AlreadyPosed { arg: ArgId, index: usize },
    #[error("critical question {index} on `{arg}` has not been posed")]
    NotPosed { arg: ArgId, index: usize },
    #[error("critical question {index} on `{arg}` was already answered")]
    AlreadyAnswered { arg: ArgId, index: usize },
    #[error("answer text must not be empty")]
    EmptyAnswer,
    #[error("graph has {nodes} nodes; enumeration is capped at {cap}")]
    TooLarge { nodes: usize, cap: usize },
}

/// A node of the attack graph: an argument, the attacker created by posing
/// one of its critical questions, or the answer to that question.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum NodeId {
    Argument { arg: ArgId },
    Challenge { arg: ArgId, cq: usize },
    Answer { arg: ArgId, cq: usize },
}

impl NodeId {
    pub fn argument(arg: impl Into<ArgId>) -> Self {
        NodeId::Argument { arg: arg.into() }
    }

    pub fn arg(&self) -> &ArgId {
        match self {
            NodeId::Argument { arg } | NodeId::Challenge { arg, .. } | NodeId::Answer { arg, .. } => {
                arg
            }
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Argument { arg } => write!(f, "{arg}"),
            NodeId::Challenge { arg, cq } => write!(f, "{arg}/cq{cq}"),
            NodeId::Answer { arg, cq } => write!(f, "{arg}/cq{cq}/answer"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    Undermine,
    Rebut,
    Undercut,
}

impl AttackKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::Undermine => "undermine",
            AttackKind::Rebut => "rebut",
            AttackKind::Undercut => "undercut",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "undermine" => Some(AttackKind::Undermine),
            "rebut" => Some(AttackKind::Rebut),
            "undercut" => Some(AttackKind::Undercut),
            _ => None,
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which part of the target an edge is aimed at. Premises are not graph
/// nodes, so undermining edges land on the argument node and record the
/// premise here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "point", content = "role", rename_all = "kebab-case")]
pub enum AttackPoint {
    Premise(Role),
    Inference,
    Claim,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttackEdge {
    pub attacker: NodeId,
    pub target: NodeId,
    pub kind: AttackKind,
    pub point: AttackPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqStatus {
    Posed,
    Answered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqEvent {
    pub target: ArgId,
    pub cq: usize,
    /// Present once the question has been answered.
    pub answer: Option<String>,
}

impl CqEvent {
    pub fn status(&self) -> CqStatus {
        if self.answer.is_some() {
            CqStatus::Answered
        } else {
            CqStatus::Posed
        }
    }

    pub fn is_open(&self) -> bool {
        self.answer.is_none()
    }
}

/// Premise a challenge of `kind` is aimed at. Backing challenges go to the
/// warrant-like premise; premise challenges to the premise sharing the most
/// variables with the question, preferring data-like premises on ties.
fn premise_target(scheme: &Scheme, cq: usize, kind: CqKind) -> Option<Role> {
    let question = scheme.cq(cq)?;
    scheme
        .premises
        .iter()
        .enumerate()
        .max_by_key(|(i, form)| {
            let shared = form
                .template
                .variables()
                .intersection(question.template.variables())
                .count();
            let first = std::cmp::Reverse(*i);
            if kind == CqKind::BackingChallenge {
                (usize::from(form.role.is_warrant_like()), shared, first)
            } else {
                (shared, usize::from(form.role.is_data_like()), first)
            }
        })
        .map(|(_, form)| form.role)
}

/// Argument instances, user attacks and critical-question events.
///
/// Graphs are values: [`pose_cq`](Self::pose_cq) and
/// [`answer_cq`](Self::answer_cq) return a new graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArgumentGraph {
    arguments: BTreeMap<ArgId, ArgumentInstance>,
    attacks: Vec<AttackEdge>,
    events: Vec<CqEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Labelling {
    pub labels: BTreeMap<NodeId, Label>,
}

impl Labelling {
    pub fn get(&self, node: &NodeId) -> Option<Label> {
        self.labels.get(node).copied()
    }

    pub fn argument(&self, arg: &ArgId) -> Option<Label> {
        self.get(&NodeId::Argument { arg: arg.clone() })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentEvaluation {
    pub label: Label,
    pub qualifier: Qualifier,
    /// Posed but unanswered critical questions, by index.
    pub open_cqs: Vec<usize>,
}

impl ArgumentGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_argument(&mut self, instance: ArgumentInstance) -> Result<(), EvalError> {
        if self.arguments.contains_key(&instance.id) {
            return Err(EvalError::DuplicateArgument(instance.id));
        }
        self.arguments.insert(instance.id.clone(), instance);
        Ok(())
    }

    /// Adds a user attack between two argument nodes. Self-attacks are
    /// allowed.
    pub fn add_attack(
        &mut self,
        attacker: &ArgId,
        target: &ArgId,
        kind: AttackKind,
    ) -> Result<(), EvalError> {
        for id in [attacker, target] {
            if !self.arguments.contains_key(id) {
                return Err(EvalError::UnknownArgument(id.clone()));
            }
        }
        let point = match kind {
            AttackKind::Undermine => AttackPoint::Premise(
                self.arguments[target]
                    .premises
                    .first()
                    .map_or(Role::Premise, |p| p.role),
            ),
            AttackKind::Rebut => AttackPoint::Claim,
            AttackKind::Undercut => AttackPoint::Inference,
        };
        let edge = AttackEdge {
            attacker: NodeId::argument(attacker.clone()),
            target: NodeId::argument(target.clone()),
            kind,
            point,
        };
        if !self.attacks.contains(&edge) {
            self.attacks.push(edge);
        }
        Ok(())
    }

    pub fn argument(&self, id: &ArgId) -> Option<&ArgumentInstance> {
        self.arguments.get(id)
    }

    pub fn arguments(&self) -> impl Iterator<Item = &ArgumentInstance> {
        self.arguments.values()
    }

    pub fn user_attacks(&self) -> &[AttackEdge] {
        &self.attacks
    }

    pub fn cq_events(&self) -> &[CqEvent] {
        &self.events
    }

    fn event(&self, arg: &ArgId, cq: usize) -> Option<&CqEvent> {
        self.events.iter().find(|e| e.target == *arg && e.cq == cq)
    }

    fn instance(&self, arg: &ArgId) -> Result<&ArgumentInstance, EvalError> {
        self.arguments
            .get(arg)
            .ok_or_else(|| EvalError::UnknownArgument(arg.clone()))
    }

    fn cq_kind(&self, arg: &ArgId, index: usize) -> Result<CqKind, EvalError> {
        let scheme = self.instance(arg)?.scheme();
        scheme
            .cq(index)
            .map(|cq| cq.kind)
            .ok_or(EvalError::InvalidCqIndex {
                arg: arg.clone(),
                index,
                count: scheme.cqs.len(),
            })
    }

    pub fn pose_cq(&self, arg: &ArgId, index: usize) -> Result<Self, EvalError> {
        self.cq_kind(arg, index)?;
        if self.event(arg, index).is_some() {
            return Err(EvalError::AlreadyPosed {
                arg: arg.clone(),
                index,
            });
        }
        let mut next = self.clone();
        next.events.push(CqEvent {
            target: arg.clone(),
            cq: index,
            answer: None,
        });
        Ok(next)
    }

    /// Any non-empty answer reinstates; adjudicating whether it is
    /// satisfactory is up to the participants.
    pub fn answer_cq(&self, arg: &ArgId, index: usize, answer: &str) -> Result<Self, EvalError> {
        self.cq_kind(arg, index)?;
        match self.event(arg, index) {
            None => {
                return Err(EvalError::NotPosed {
                    arg: arg.clone(),
                    index,
                })
            }
            Some(e) if !e.is_open() => {
                return Err(EvalError::AlreadyAnswered {
                    arg: arg.clone(),
                    index,
                })
            }
            Some(_) => {}
        }
        if answer.trim().is_empty() {
            return Err(EvalError::EmptyAnswer);
        }
        let mut next = self.clone();
        let event = next
            .events
            .iter_mut()
            .find(|e| e.target == *arg && e.cq == index)
            .expect("event checked above");
        event.answer = Some(crate::scheme::normalize(answer));
        Ok(next)
    }

    /// Indices of posed, unanswered questions on `arg`, ascending.
    pub fn open_cqs(&self, arg: &ArgId) -> Vec<usize> {
        let mut open: Vec<usize> = self
            .events
            .iter()
            .filter(|e| e.target == *arg && e.is_open())
            .map(|e| e.cq)
            .collect();
        open.sort_unstable();
        open
    }

    pub fn nodes(&self) -> BTreeSet<NodeId> {
        let mut nodes: BTreeSet<NodeId> = self
            .arguments
            .keys()
            .map(|a| NodeId::argument(a.clone()))
            .collect();
        for e in &self.events {
            nodes.insert(NodeId::Challenge {
                arg: e.target.clone(),
                cq: e.cq,
            });
            if e.answer.is_some() {
                nodes.insert(NodeId::Answer {
                    arg: e.target.clone(),
                    cq: e.cq,
                });
            }
        }
        nodes
    }

    /// Edges generated by critical-question events.
    pub fn derived_edges(&self) -> Vec<AttackEdge> {
        let mut edges = Vec::new();
        for e in &self.events {
            let instance = &self.arguments[&e.target];
            let kind = instance
                .scheme()
                .cq(e.cq)
                .expect("event index validated on pose")
                .kind;
            let challenge = NodeId::Challenge {
                arg: e.target.clone(),
                cq: e.cq,
            };
            let edge = match kind {
                CqKind::QualifierChallenge => None,
                CqKind::BackingChallenge | CqKind::PremiseChallenge => Some((
                    AttackKind::Undermine,
                    AttackPoint::Premise(
                        premise_target(instance.scheme(), e.cq, kind).unwrap_or(Role::Premise),
                    ),
                )),
                CqKind::Rebut => Some((AttackKind::Rebut, AttackPoint::Claim)),
                CqKind::Undercut => Some((AttackKind::Undercut, AttackPoint::Inference)),
            };
            if let Some((kind, point)) = edge {
                edges.push(AttackEdge {
                    attacker: challenge.clone(),
                    target: NodeId::argument(e.target.clone()),
                    kind,
                    point,
                });
            }
            if e.answer.is_some() {
                edges.push(AttackEdge {
                    attacker: NodeId::Answer {
                        arg: e.target.clone(),
                        cq: e.cq,
                    },
                    target: challenge,
                    kind: AttackKind::Rebut,
                    point: AttackPoint::Claim,
                });
            }
        }
        edges
    }

    pub fn edges(&self) -> Vec<AttackEdge> {
        let mut edges = self.attacks.clone();
        edges.extend(self.derived_edges());
        edges
    }

    /// The node list (sorted) and the index framework over it.
    pub fn framework(&self) -> (Vec<NodeId>, Framework) {
        let nodes: Vec<NodeId> = self.nodes().into_iter().collect();
        let index: BTreeMap<&NodeId, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let fw = Framework::from_edges(
            nodes.len(),
            self.edges()
                .iter()
                .map(|e| (index[&e.attacker], index[&e.target])),
        );
        (nodes, fw)
    }

    fn label_with(nodes: Vec<NodeId>, labels: Vec<Label>) -> Labelling {
        Labelling {
            labels: nodes.into_iter().zip(labels).collect(),
        }
    }

    pub fn grounded_labelling(&self) -> Labelling {
        let (nodes, fw) = self.framework();
        let labels = fw.grounded();
        Self::label_with(nodes, labels)
    }

    /// Enumeration oracle for [`grounded_labelling`](Self::grounded_labelling).
    pub fn brute_force_labelling(&self) -> Result<Labelling, EvalError> {
        let (nodes, fw) = self.framework();
        let labels = fw.brute_force().ok_or(EvalError::TooLarge {
            nodes: nodes.len(),
            cap: BRUTE_FORCE_CAP,
        })?;
        Ok(Self::label_with(nodes, labels))
    }

    /// Class A/B instances are always `certain`. Otherwise the instance
    /// qualifier drops one step per open qualifier challenge, down to
    /// `plausible`.
    pub fn effective_qualifier(&self, arg: &ArgId) -> Result<Qualifier, EvalError> {
        let instance = self.instance(arg)?;
        let scheme = instance.scheme();
        if scheme.class.is_deductive() {
            return Ok(Qualifier::Certain);
        }
        let open_challenges = self
            .events
            .iter()
            .filter(|e| e.target == *arg && e.is_open())
            .filter(|e| {
                scheme
                    .cq(e.cq)
                    .is_some_and(|cq| cq.kind == CqKind::QualifierChallenge)
            })
            .count();
        Ok((0..open_challenges).fold(instance.qualifier, |q, _| q.weaker()))
    }

    pub fn evaluate_argument(&self, arg: &ArgId) -> Result<ArgumentEvaluation, EvalError> {
        let qualifier = self.effective_qualifier(arg)?;
        let label = self
            .grounded_labelling()
            .argument(arg)
            .expect("argument nodes are always labelled");
        Ok(ArgumentEvaluation {
            label,
            qualifier,
            open_cqs: self.open_cqs(arg),
        })
    }
}
