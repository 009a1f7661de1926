//! Variable naming rules shared by the model validator and the layout planner.
//!
//! Spreadsheet defined names are case-insensitive, so every lookup keyed by
//! a variable name goes through [`NameMap`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("name is empty")]
    Empty,
    #[error("name {0:?} contains characters not allowed in a defined name")]
    IllegalCharacters(String),
    #[error("name {0:?} collides with a cell reference")]
    CellReference(String),
}

/// True when `text` would be read by a spreadsheet as a cell address
/// (`Q1`, `ab12`) or as the row/column shorthand `R` / `C`.
pub fn looks_like_cell_reference(text: &str) -> bool {
    if text.eq_ignore_ascii_case("R") || text.eq_ignore_ascii_case("C") {
        return true;
    }
    let letters = text.bytes().take_while(u8::is_ascii_alphabetic).count();
    let rest = &text.as_bytes()[letters..];
    (1..=3).contains(&letters)
        && (1..=7).contains(&rest.len())
        && rest.iter().all(u8::is_ascii_digit)
}

/// Checks `^[A-Za-z_][A-Za-z0-9_.]*$` and the cell-reference exclusion.
pub fn check_name(name: &str) -> Result<(), NameError> {
    let mut bytes = name.bytes();
    let Some(first) = bytes.next() else {
        return Err(NameError::Empty);
    };
    let head_ok = first.is_ascii_alphabetic() || first == b'_';
    let tail_ok = bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.');
    if !head_ok || !tail_ok {
        return Err(NameError::IllegalCharacters(name.to_string()));
    }
    if looks_like_cell_reference(name) {
        return Err(NameError::CellReference(name.to_string()));
    }
    Ok(())
}

/// Turns a display label into the defined name a spreadsheet would create
/// from it ("Surplus Dist Cost" becomes "Surplus_Dist_Cost").
pub fn derive_defined_name(label: &str) -> Result<String, NameError> {
    let name = label.replace(' ', "_");
    check_name(&name)?;
    Ok(name)
}

/// Default display label for a variable name.
pub fn default_label(name: &str) -> String {
    name.replace('_', " ")
}

/// Normalized lookup key for a name.
pub fn name_key(name: &str) -> String {
    name.to_ascii_uppercase()
}

/// Map keyed by variable name, compared case-insensitively. Iteration order
/// is by normalized key.
#[derive(Clone, PartialEq)]
pub struct NameMap<V> {
    entries: BTreeMap<String, (String, V)>,
}

impl<V> NameMap<V> {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// Inserts, returning the previous value stored under an equivalent name.
    pub fn insert(&mut self, name: impl Into<String>, value: V) -> Option<V> {
        let name = name.into();
        self.entries
            .insert(name_key(&name), (name, value))
            .map(|(_, v)| v)
    }

    pub fn get(&self, name: &str) -> Option<&V> {
        self.entries.get(&name_key(name)).map(|(_, v)| v)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut V> {
        self.entries.get_mut(&name_key(name)).map(|(_, v)| v)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(&name_key(name))
    }

    /// The spelling the name was inserted with.
    pub fn canonical(&self, name: &str) -> Option<&str> {
        self.entries.get(&name_key(name)).map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &V)> {
        self.entries.values().map(|(n, v)| (n.as_str(), v))
    }
}

impl<V> Default for NameMap<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: fmt::Debug> fmt::Debug for NameMap<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

impl<K: Into<String>, V> FromIterator<(K, V)> for NameMap<V> {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        let mut map = Self::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_reference_shapes() {
        for name in ["Q1", "q1", "AB12", "xfd1048576", "R", "c", "A1234567"] {
            assert!(looks_like_cell_reference(name), "{name}");
        }
        for name in ["Q", "ABCD1", "A12345678", "Nb_Days", "RC", "Q1_", "_Q1", "Q1.5"] {
            assert!(!looks_like_cell_reference(name), "{name}");
        }
    }

    #[test]
    fn derive_from_labels() {
        assert_eq!(derive_defined_name("Surplus Dist Cost").unwrap(), "Surplus_Dist_Cost");
        assert_eq!(derive_defined_name("X").unwrap(), "X");
        assert_eq!(
            derive_defined_name("Q1"),
            Err(NameError::CellReference("Q1".into()))
        );
        assert!(matches!(
            derive_defined_name("Cost ($)"),
            Err(NameError::IllegalCharacters(_))
        ));
        assert!(matches!(derive_defined_name("1st Day"), Err(NameError::IllegalCharacters(_))));
        assert_eq!(derive_defined_name(""), Err(NameError::Empty));
    }

    #[test]
    fn label_and_name_are_inverse() {
        let name = "Surplus_Dist_Cost";
        assert_eq!(derive_defined_name(&default_label(name)).unwrap(), name);
    }

    #[test]
    fn name_map_ignores_case() {
        let mut map = NameMap::new();
        assert!(map.insert("Nb_Days", 1).is_none());
        assert_eq!(map.insert("NB_DAYS", 2), Some(1));
        assert_eq!(map.get("nb_days"), Some(&2));
        assert_eq!(map.canonical("nb_days"), Some("NB_DAYS"));
        assert_eq!(map.len(), 1);
    }
}
