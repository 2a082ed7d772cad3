use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! kebab_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| format!("unknown {} `{s}`", stringify!($name)))
            }
        }
    };
}

kebab_enum! {
    InitialSituation {
        Conflict => "conflict",
        OpenProblem => "open-problem",
        InfoAsymmetry => "info-asymmetry",
    }
}

kebab_enum! {
    MainGoal {
        StableResolution => "stable-resolution",
        PracticalSettlement => "practical-settlement",
        ProvisionalAccommodation => "provisional-accommodation",
    }
}

kebab_enum! {
    DialogueTypeId {
        Persuasion => "persuasion",
        Inquiry => "inquiry",
        InformationSeekingPedagogical => "information-seeking-pedagogical",
        InformationSeekingOracular => "information-seeking-oracular",
        Deliberation => "deliberation",
        Negotiation => "negotiation",
        Eristic => "eristic",
    }
}

kebab_enum! {
    MoveKind {
        Assert => "assert",
        Argue => "argue",
        PoseCq => "pose-cq",
        AnswerCq => "answer-cq",
        Concede => "concede",
        Retract => "retract",
        Offer => "offer",
        Accept => "accept",
        ProposeShift => "propose-shift",
        AcceptShift => "accept-shift",
        Close => "close",
    }
}

kebab_enum! {
    /// How a dialectical shift changes the frame stack.
    ShiftMode {
        Replace => "replace",
        Embed => "embed",
        Pop => "pop",
    }
}

/// The two dialogue roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Proponent,
    Respondent,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Proponent => Side::Respondent,
            Side::Respondent => Side::Proponent,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Proponent => 0,
            Side::Respondent => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Proponent => "proponent",
            Side::Respondent => "respondent",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Table of dialogue types by main goal (rows) and initial situation
/// (columns). `None` cells are incoherent combinations.
pub fn types_for(goal: MainGoal, situation: InitialSituation) -> Option<&'static [DialogueTypeId]> {
    use DialogueTypeId::*;
    use InitialSituation::*;
    use MainGoal::*;
    match (goal, situation) {
        (StableResolution, Conflict) => Some(&[Persuasion]),
        (StableResolution, OpenProblem) => Some(&[Inquiry]),
        (StableResolution, InfoAsymmetry) => {
            Some(&[InformationSeekingPedagogical, InformationSeekingOracular])
        }
        (PracticalSettlement, Conflict) => Some(&[Negotiation]),
        (PracticalSettlement, OpenProblem) => Some(&[Deliberation]),
        (ProvisionalAccommodation, Conflict) => Some(&[Eristic]),
        (PracticalSettlement, InfoAsymmetry)
        | (ProvisionalAccommodation, OpenProblem)
        | (ProvisionalAccommodation, InfoAsymmetry) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueType {
    pub id: DialogueTypeId,
    pub situation: InitialSituation,
    pub goal: MainGoal,
    pub proponent_goal: &'static str,
    pub respondent_goal: &'static str,
    /// The respondent is an oracle whose contributions cannot be challenged.
    pub oracle_mode: bool,
    proponent_moves: &'static [MoveKind],
    respondent_moves: &'static [MoveKind],
}

/// Moves available in every type.
const PROTOCOL_MOVES: [MoveKind; 3] = [MoveKind::ProposeShift, MoveKind::AcceptShift, MoveKind::Close];

const CRITICAL: &[MoveKind] = &[
    MoveKind::Assert,
    MoveKind::Argue,
    MoveKind::PoseCq,
    MoveKind::AnswerCq,
    MoveKind::Concede,
    MoveKind::Retract,
];

const TYPES: [DialogueType; 7] = [
    DialogueType {
        id: DialogueTypeId::Persuasion,
        situation: InitialSituation::Conflict,
        goal: MainGoal::StableResolution,
        proponent_goal: "Persuade respondent",
        respondent_goal: "Persuade proponent",
        oracle_mode: false,
        proponent_moves: CRITICAL,
        respondent_moves: CRITICAL,
    },
    DialogueType {
        id: DialogueTypeId::Inquiry,
        situation: InitialSituation::OpenProblem,
        goal: MainGoal::StableResolution,
        proponent_goal: "Contribute to main goal",
        respondent_goal: "Obtain knowledge",
        oracle_mode: false,
        proponent_moves: CRITICAL,
        respondent_moves: CRITICAL,
    },
    DialogueType {
        id: DialogueTypeId::InformationSeekingPedagogical,
        situation: InitialSituation::InfoAsymmetry,
        goal: MainGoal::StableResolution,
        proponent_goal: "Disseminate knowledge of results and methods",
        respondent_goal: "Obtain knowledge",
        oracle_mode: false,
        proponent_moves: &[
            MoveKind::Assert,
            MoveKind::Argue,
            MoveKind::AnswerCq,
            MoveKind::Retract,
        ],
        respondent_moves: &[MoveKind::PoseCq, MoveKind::Concede, MoveKind::Retract],
    },
    DialogueType {
        id: DialogueTypeId::InformationSeekingOracular,
        situation: InitialSituation::InfoAsymmetry,
        goal: MainGoal::StableResolution,
        proponent_goal: "Obtain information",
        respondent_goal: "Inscrutable",
        oracle_mode: true,
        proponent_moves: &[MoveKind::Concede, MoveKind::Retract],
        respondent_moves: &[MoveKind::Assert, MoveKind::Retract],
    },
    DialogueType {
        id: DialogueTypeId::Deliberation,
        situation: InitialSituation::OpenProblem,
        goal: MainGoal::PracticalSettlement,
        proponent_goal: "Contribute to main goal",
        respondent_goal: "Obtain warranted belief",
        oracle_mode: false,
        proponent_moves: CRITICAL,
        respondent_moves: CRITICAL,
    },
    DialogueType {
        id: DialogueTypeId::Negotiation,
        situation: InitialSituation::Conflict,
        goal: MainGoal::PracticalSettlement,
        proponent_goal: "Contribute to main goal",
        respondent_goal: "Maximize value of exchange",
        oracle_mode: false,
        proponent_moves: &[
            MoveKind::Assert,
            MoveKind::Offer,
            MoveKind::Accept,
            MoveKind::Concede,
            MoveKind::Retract,
        ],
        respondent_moves: &[
            MoveKind::Assert,
            MoveKind::Offer,
            MoveKind::Accept,
            MoveKind::Concede,
            MoveKind::Retract,
        ],
    },
    DialogueType {
        id: DialogueTypeId::Eristic,
        situation: InitialSituation::Conflict,
        goal: MainGoal::ProvisionalAccommodation,
        proponent_goal: "Verbally hit out at and humiliate opponent",
        respondent_goal: "Verbally hit out at and humiliate opponent",
        oracle_mode: false,
        proponent_moves: &[MoveKind::Assert, MoveKind::Retract],
        respondent_moves: &[MoveKind::Assert, MoveKind::Retract],
    },
];

pub fn dialogue_type(id: DialogueTypeId) -> &'static DialogueType {
    TYPES
        .iter()
        .find(|t| t.id == id)
        .expect("every id has a registry entry")
}

pub fn dialogue_types() -> &'static [DialogueType] {
    &TYPES
}

impl DialogueType {
    /// Moves `side` may make in this type, protocol moves included.
    pub fn permitted(&self, side: Side) -> impl Iterator<Item = MoveKind> + '_ {
        let own = match side {
            Side::Proponent => self.proponent_moves,
            Side::Respondent => self.respondent_moves,
        };
        own.iter().copied().chain(PROTOCOL_MOVES)
    }

    pub fn permits(&self, side: Side, kind: MoveKind) -> bool {
        self.permitted(side).any(|k| k == kind)
    }

    /// Union over both roles.
    pub fn permitted_moves(&self) -> BTreeSet<MoveKind> {
        self.permitted(Side::Proponent)
            .chain(self.permitted(Side::Respondent))
            .collect()
    }

    pub fn goal_of(&self, side: Side) -> &'static str {
        match side {
            Side::Proponent => self.proponent_goal,
            Side::Respondent => self.respondent_goal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_entries_sit_in_their_table_cell() {
        for t in dialogue_types() {
            let cell = types_for(t.goal, t.situation).expect("coherent");
            assert!(cell.contains(&t.id), "{}", t.id);
            assert_eq!(t.oracle_mode, t.id == DialogueTypeId::InformationSeekingOracular);
        }
    }

    #[test]
    fn three_incoherent_cells() {
        let mut na = 0;
        for &g in MainGoal::ALL {
            for &s in InitialSituation::ALL {
                if types_for(g, s).is_none() {
                    na += 1;
                }
            }
        }
        assert_eq!(na, 3);
    }

    #[test]
    fn names_round_trip() {
        for &id in DialogueTypeId::ALL {
            assert_eq!(id.as_str().parse::<DialogueTypeId>(), Ok(id));
        }
        assert!("debate".parse::<DialogueTypeId>().is_err());
    }

    #[test]
    fn oracle_cannot_be_questioned() {
        let t = dialogue_type(DialogueTypeId::InformationSeekingOracular);
        assert!(!t.permitted_moves().contains(&MoveKind::PoseCq));
        assert_eq!(t.respondent_goal, "Inscrutable");
    }
}
