use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError, Result, Subgroup};

/// On-disk form of an abstract Galois group with its decomposition subgroups.
///
/// Element indices are 0-based rows of the Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractGroupDoc {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(rename = "D_inf")]
    pub d_inf: Vec<usize>,
    #[serde(rename = "D_ell")]
    pub d_ell: Vec<usize>,
}

/// A validated [`AbstractGroupDoc`].
#[derive(Debug, Clone)]
pub struct AbstractGroupInput {
    pub group: FiniteGroup,
    pub d_inf: Subgroup,
    pub d_ell: Subgroup,
}

impl AbstractGroupDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GroupError::Json(e.to_string()))
    }

    pub fn from_parts(group: &FiniteGroup, d_inf: &Subgroup, d_ell: &Subgroup) -> Self {
        AbstractGroupDoc {
            order: group.order(),
            table: group.table(),
            d_inf: d_inf.elements().collect(),
            d_ell: d_ell.elements().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn validate(&self) -> Result<AbstractGroupInput> {
        if self.table.len() != self.order {
            return Err(GroupError::Json(format!(
                "order {} does not match a table with {} rows",
                self.order,
                self.table.len()
            )));
        }
        let group = FiniteGroup::from_table(self.table.clone())?;
        let d_inf = group.subgroup(&self.d_inf)?;
        let d_ell = group.subgroup(&self.d_ell)?;
        Ok(AbstractGroupInput { group, d_inf, d_ell })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_klein_four() {
        let text = r#"{"order": 4, "table": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]],
                       "D_inf": [0,1], "D_ell": [0,2]}"#;
        let input = AbstractGroupDoc::parse(text).unwrap().validate().unwrap();
        assert_eq!(input.group.order(), 4);
        assert_eq!(input.d_inf.order(), 2);
        assert!(input.d_ell.contains(2));
        let back = AbstractGroupDoc::from_parts(&input.group, &input.d_inf, &input.d_ell);
        assert_eq!(AbstractGroupDoc::parse(&back.to_json()).unwrap(), back);
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let bad_order = r#"{"order": 3, "table": [[0,1],[1,0]], "D_inf": [0], "D_ell": [0]}"#;
        assert!(AbstractGroupDoc::parse(bad_order).unwrap().validate().is_err());
        let bad_sub = r#"{"order": 2, "table": [[0,1],[1,0]], "D_inf": [1], "D_ell": [0]}"#;
        assert!(matches!(
            AbstractGroupDoc::parse(bad_sub).unwrap().validate(),
            Err(GroupError::NotASubgroup(_))
        ));
        assert!(AbstractGroupDoc::parse("{").is_err());
    }
}
