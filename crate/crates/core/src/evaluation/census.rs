use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::datamodel::{Config, Session};
use crate::ingest::IdfTable;
use crate::linguistics::{detect_pronouns, find_omission_candidates, OmissionRules, PosTagger, PronounInventory};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnAmbiguity {
    pub has_coref: bool,
    pub has_omission: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityCensus {
    pub coreference_count: usize,
    pub omission_count: usize,
    pub per_turn: BTreeMap<(String, usize), TurnAmbiguity>,
}

/// Runs both detectors over every raw query.
pub fn ambiguity_census(
    sessions: &[Session],
    idf: &IdfTable,
    config: &Config,
    tagger: &dyn PosTagger,
    inventory: &PronounInventory,
) -> AmbiguityCensus {
    let rules = OmissionRules::from_config(config);
    let mut census = AmbiguityCensus::default();
    for session in sessions {
        for turn in &session.turns {
            let tokens = tagger.tag(&turn.raw_query);
            let flags = TurnAmbiguity {
                has_coref: !detect_pronouns(&tokens, inventory).is_empty(),
                has_omission: !find_omission_candidates(&tokens, idf, &rules).is_empty(),
            };
            census.coreference_count += flags.has_coref as usize;
            census.omission_count += flags.has_omission as usize;
            census.per_turn.insert((session.session_id.clone(), turn.turn_id), flags);
        }
    }
    census
}

impl AmbiguityCensus {
    /// Per-turn flags followed by a two-row totals table.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("session_id\tturn_id\tcoreference\tomission\n");
        for ((session, turn), flags) in &self.per_turn {
            writeln!(out, "{session}\t{turn}\t{}\t{}", flags.has_coref as u8, flags.has_omission as u8).unwrap();
        }
        out.push('\n');
        writeln!(out, "Coreference\t{}", self.coreference_count).unwrap();
        writeln!(out, "Omission\t{}", self.omission_count).unwrap();
        out
    }

    /// Totals only, one row per ambiguity type.
    pub fn totals_tsv(&self) -> String {
        format!(
            "ambiguity\tqueries\nCoreference\t{}\nOmission\t{}\n",
            self.coreference_count, self.omission_count
        )
    }
}
