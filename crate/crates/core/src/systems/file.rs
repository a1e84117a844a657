//! Text description of a paired system.
//!
//! ```toml
//! points = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
//! weights = ["1", "1", "1", "1"]
//! group_g = { table = [[0, 1], [1, 0]] }
//! group_h = { table = [[0, 1], [1, 0]] }
//! left_action = [[0, 1, 2, 3], [2, 3, 0, 1]]
//! right_action = [[0, 1, 2, 3], [1, 0, 3, 2]]
//! ```
//!
//! Row `e` of an action table lists the image of every point under group
//! element `e`. Group tables are full multiplication tables; the identity
//! and inverses are derived from them.

use serde::{Deserialize, Serialize};

use super::PairedSystem;
use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::rational::Q;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDescription {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDescription {
    pub points: Vec<String>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub weights: Vec<Q>,
    pub group_g: GroupDescription,
    pub group_h: GroupDescription,
    pub left_action: Vec<Vec<usize>>,
    pub right_action: Vec<Vec<usize>>,
}

impl SystemDescription {
    pub fn from_system(sys: &PairedSystem) -> Self {
        use super::Side;
        let group = |side: Side| {
            let g = sys.group(side);
            GroupDescription {
                table: g.table().to_vec(),
                labels: Some((0..g.order()).map(|e| g.label(e).to_string()).collect()),
            }
        };
        Self {
            points: sys.labels().to_vec(),
            weights: sys.weights().to_vec(),
            group_g: group(Side::G),
            group_h: group(Side::H),
            left_action: sys.action_table(Side::G).to_vec(),
            right_action: sys.action_table(Side::H).to_vec(),
        }
    }

    pub fn into_system(self) -> Result<PairedSystem> {
        let group = |d: GroupDescription| -> Result<FiniteGroup> {
            let g = FiniteGroup::from_table(d.table)?;
            match d.labels {
                Some(labels) => g.with_labels(labels),
                None => Ok(g),
            }
        };
        PairedSystem::new(
            self.points,
            self.weights,
            group(self.group_g)?,
            group(self.group_h)?,
            self.left_action,
            self.right_action,
        )
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("system description serializes")
    }
}

pub fn parse_system_description(text: &str) -> Result<PairedSystem> {
    let desc: SystemDescription =
        toml::from_str(text).map_err(|e| LabError::Parse(format!("system description: {e}")))?;
    desc.into_system()
}
