//! Joining the sparse recommendation network through the social graph.
//!
//! Seeders are people present in both networks. [`extract_tn`] keeps one
//! shortest social path per seeder pair (the transition network);
//! [`build_ern`] adds a seeder–seeder edge for every pair at social
//! distance `1..=K`, weighted by that distance; [`ern_series`] tabulates
//! the largest component for `K = 1..=K_max`.

mod ern;
mod tn;

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

pub use ern::{
    build_ern, ern_series, expand_ern, seeder_apl, ErnConfig, ErnEdge, ErnRow, ErnSeries,
    RelativeRow, SeederApl, WeightedGraph,
};
pub use tn::{extract_tn, SeederDistanceMatrix, TnEdgeMode, TransitionNetwork};

use crate::error::{Error, Result};
use crate::graph::{validate_token, SeedSet};

/// One-to-one mapping between recommendation-network tokens and social
/// network tokens. File form: `<rn_token><TAB><osn_token>` per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeederMap {
    pairs: Vec<(String, String)>,
}

impl SeederMap {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self> {
        let mut rn_seen = HashSet::new();
        let mut osn_seen = HashSet::new();
        for (rn, osn) in &pairs {
            validate_token(rn)?;
            validate_token(osn)?;
            if !rn_seen.insert(rn.as_str()) {
                return Err(Error::Config(format!("seeder `{rn}` mapped twice")));
            }
            if !osn_seen.insert(osn.as_str()) {
                return Err(Error::Config(format!("social node `{osn}` mapped twice")));
            }
        }
        Ok(SeederMap { pairs })
    }

    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let Some(fields) = crate::graph::ingest::split_fields(&line) else {
                continue;
            };
            if fields.len() != 2 {
                return Err(Error::parse(
                    i + 1,
                    format!("expected `<rn_token> <osn_token>`, found {} fields", fields.len()),
                ));
            }
            pairs.push((fields[0].to_owned(), fields[1].to_owned()));
        }
        SeederMap::new(pairs)
    }

    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for (rn, osn) in &self.pairs {
            s.push_str(rn);
            s.push('\t');
            s.push_str(osn);
            s.push('\n');
        }
        s
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn rn_seeds(&self) -> SeedSet {
        SeedSet::new(self.pairs.iter().map(|(r, _)| r.clone())).expect("validated tokens")
    }

    pub fn osn_seeds(&self) -> SeedSet {
        SeedSet::new(self.pairs.iter().map(|(_, o)| o.clone())).expect("validated tokens")
    }

    pub fn osn_to_rn(&self) -> HashMap<String, String> {
        self.pairs
            .iter()
            .map(|(r, o)| (o.clone(), r.clone()))
            .collect()
    }
}
