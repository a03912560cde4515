//! Name → factory tables for the interchangeable algorithm families.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Factory taking construction arguments `A` and producing a boxed `T`.
pub type Factory<A, T> = fn(&A) -> Box<T>;

/// A family of trait-object implementations selectable by name.
pub struct Registry<A, T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Factory<A, T>>,
}

impl<A, T: ?Sized> Registry<A, T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `factory` under `name`, replacing any previous entry.
    pub fn register(&mut self, name: &'static str, factory: Factory<A, T>) -> &mut Self {
        self.entries.insert(name, factory);
        self
    }

    pub fn with(mut self, name: &'static str, factory: Factory<A, T>) -> Self {
        self.register(name, factory);
        self
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn create(&self, name: &str, args: &A) -> Result<Box<T>> {
        match self.entries.get(name) {
            Some(factory) => Ok(factory(args)),
            None => Err(Error::UnknownName {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().join(", "),
            }),
        }
    }
}
