use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// Interned symbol. Ids are handed out in first-use order and never reused,
/// which makes the id order the variable order of the monomial ordering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

#[derive(Default)]
struct Table {
    names: Vec<Arc<str>>,
    index: HashMap<Arc<str>, u32>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Table::default()))
}

impl Symbol {
    /// Interns `name`, returning the existing symbol when already present.
    pub fn new(name: &str) -> Symbol {
        if let Some(s) = Symbol::lookup(name) {
            return s;
        }
        let mut t = table().write().expect("symbol table poisoned");
        if let Some(&id) = t.index.get(name) {
            return Symbol(id);
        }
        let id = t.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        t.names.push(name.clone());
        t.index.insert(name, id);
        Symbol(id)
    }

    pub fn lookup(name: &str) -> Option<Symbol> {
        let t = table().read().expect("symbol table poisoned");
        t.index.get(name).map(|&id| Symbol(id))
    }

    pub fn name(self) -> Arc<str> {
        let t = table().read().expect("symbol table poisoned");
        t.names[self.0 as usize].clone()
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let a = Symbol::new("sym_test_alpha");
        let b = Symbol::new("sym_test_alpha");
        assert_eq!(a, b);
        assert_eq!(&*a.name(), "sym_test_alpha");
        assert_eq!(Symbol::lookup("sym_test_alpha"), Some(a));
        assert_eq!(Symbol::lookup("sym_test_never_declared"), None);
    }

    #[test]
    fn later_symbols_get_larger_ids() {
        let a = Symbol::new("sym_test_order_first");
        let b = Symbol::new("sym_test_order_second");
        assert!(a < b);
    }
}
