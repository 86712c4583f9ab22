//! Integer scalar bounds shared by the sequence tables and everything that reads them.

use std::fmt::Debug;
use std::hash::Hash;

use num_traits::PrimInt;

/// Gathers the traits needed of a table's storage integer.
pub trait SeqValue: PrimInt + Hash + Debug + Send + Sync + 'static {}

impl<T: PrimInt + Hash + Debug + Send + Sync + 'static> SeqValue for T {}
