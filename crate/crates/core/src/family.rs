//! Families of order-1 deltas and their classification up to local relabelings.
//!
//! The relabelings used here act on the two remaining parties separately
//! (setting permutations, sign flips, overall sign) but never exchange them,
//! so a form and its transpose may land in different families.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::delta::DeltaPoly;
use crate::error::{BellError, Result};
use crate::scenario::Dyadic;
use crate::symmetry::canonical_form;

/// Family labels. `Zero` and `Product` are the degenerate forms (identically
/// zero, and a single `b_x c_y` term); the `TwoParty*` labels cover deltas of
/// a two-party function, which depend on one remaining party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    Zero,
    Product,
    Delta0,
    DeltaI,
    DeltaII,
    DeltaIII,
    DeltaIV,
    DeltaV,
    DeltaVI,
    DeltaVII,
    DeltaVIII,
    DeltaIX,
    DeltaX,
    DeltaXI,
    DeltaXII,
    TwoPartyZero,
    TwoPartySingle,
    TwoPartyHalfPair,
}

impl FamilyId {
    pub const THREE_PARTY: [FamilyId; 15] = [
        FamilyId::Zero,
        FamilyId::Product,
        FamilyId::Delta0,
        FamilyId::DeltaI,
        FamilyId::DeltaII,
        FamilyId::DeltaIII,
        FamilyId::DeltaIV,
        FamilyId::DeltaV,
        FamilyId::DeltaVI,
        FamilyId::DeltaVII,
        FamilyId::DeltaVIII,
        FamilyId::DeltaIX,
        FamilyId::DeltaX,
        FamilyId::DeltaXI,
        FamilyId::DeltaXII,
    ];

    pub const TWO_PARTY: [FamilyId; 3] = [
        FamilyId::TwoPartyZero,
        FamilyId::TwoPartySingle,
        FamilyId::TwoPartyHalfPair,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            FamilyId::Zero => "zero",
            FamilyId::Product => "product",
            FamilyId::Delta0 => "0",
            FamilyId::DeltaI => "I",
            FamilyId::DeltaII => "II",
            FamilyId::DeltaIII => "III",
            FamilyId::DeltaIV => "IV",
            FamilyId::DeltaV => "V",
            FamilyId::DeltaVI => "VI",
            FamilyId::DeltaVII => "VII",
            FamilyId::DeltaVIII => "VIII",
            FamilyId::DeltaIX => "IX",
            FamilyId::DeltaX => "X",
            FamilyId::DeltaXI => "XI",
            FamilyId::DeltaXII => "XII",
            FamilyId::TwoPartyZero => "zero",
            FamilyId::TwoPartySingle => "single",
            FamilyId::TwoPartyHalfPair => "half-pair",
        }
    }

    /// Representative numerators (over 4 for three parties, over 2 for two),
    /// rows indexed by the first remaining party.
    fn representative_numerators(&self) -> Vec<i64> {
        match self {
            FamilyId::Zero => vec![0; 9],
            FamilyId::Product => vec![4, 0, 0, 0, 0, 0, 0, 0, 0],
            FamilyId::Delta0 => vec![2, 2, 0, 2, -2, 0, 0, 0, 0],
            FamilyId::DeltaI => vec![-3, 1, 0, 1, 1, 0, 0, 0, 0],
            FamilyId::DeltaII => vec![2, 2, 0, 0, 0, 0, 0, 0, 0],
            FamilyId::DeltaIII => vec![2, 0, 0, 2, 0, 0, 0, 0, 0],
            FamilyId::DeltaIV => vec![2, 0, 0, 0, 2, 0, 0, 0, 0],
            FamilyId::DeltaV => vec![2, 1, 1, 0, 1, -1, 0, 0, 0],
            FamilyId::DeltaVI => vec![1, 1, 0, 1, 1, 0, 0, 0, 0],
            FamilyId::DeltaVII => vec![0, 1, -1, 1, -1, 0, 1, 0, -1],
            FamilyId::DeltaVIII => vec![2, 1, 1, 1, -1, 0, 1, 0, -1],
            FamilyId::DeltaIX => vec![2, 1, 1, 2, -1, -1, 0, 0, 0],
            FamilyId::DeltaX => vec![2, 2, 0, 1, -1, 0, 1, -1, 0],
            // Read as 2b_0c_0 (the printed "2b_0" lacks Carol's factor).
            FamilyId::DeltaXI => vec![2, 0, 0, 1, 1, 0, 1, -1, 0],
            FamilyId::DeltaXII => vec![2, 0, 0, 0, 1, 1, 0, 1, -1],
            FamilyId::TwoPartyZero => vec![0, 0, 0],
            FamilyId::TwoPartySingle => vec![2, 0, 0],
            FamilyId::TwoPartyHalfPair => vec![1, 1, 0],
        }
    }

    fn is_two_party(&self) -> bool {
        FamilyId::TWO_PARTY.contains(self)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A family with its representative delta and squared norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaFamily {
    pub id: FamilyId,
    pub representative: DeltaPoly,
    pub norm_sq: Dyadic,
}

impl DeltaFamily {
    pub fn new(id: FamilyId) -> Self {
        let (remaining, settings, exp) = if id.is_two_party() {
            (vec![1], vec![3], 1)
        } else {
            (vec![1, 2], vec![3, 3], 2)
        };
        let representative = DeltaPoly::from_parts(
            vec![crate::delta::Var::new(0, 0)],
            remaining,
            settings,
            exp,
            id.representative_numerators(),
        )
        .expect("representative shapes are fixed");
        let norm_sq = representative.norm_sq();
        Self {
            id,
            representative,
            norm_sq,
        }
    }

    pub fn all_three_party() -> Vec<DeltaFamily> {
        FamilyId::THREE_PARTY.iter().map(|&id| Self::new(id)).collect()
    }

    pub fn all_two_party() -> Vec<DeltaFamily> {
        FamilyId::TWO_PARTY.iter().map(|&id| Self::new(id)).collect()
    }
}

type Index = HashMap<(Vec<usize>, Vec<i64>), FamilyId>;

fn index() -> &'static Index {
    static INDEX: OnceLock<Index> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut map = HashMap::new();
        for fam in DeltaFamily::all_three_party()
            .into_iter()
            .chain(DeltaFamily::all_two_party())
        {
            let settings = fam.representative.remaining_settings().to_vec();
            let (canon, _) = canonical_form(&settings, fam.representative.numerators(), false);
            let previous = map.insert((settings, canon), fam.id);
            assert!(previous.is_none(), "families {:?} and {:?} coincide", previous, fam.id);
        }
        map
    })
}

/// Family of an order-1 delta, or `None` if it matches no listed family.
///
/// Works for deltas over two remaining parties with three settings each
/// (three-party functions) and over one remaining party with three
/// settings (two-party functions).
pub fn classify_delta(d: &DeltaPoly) -> Result<Option<FamilyId>> {
    let settings = d.remaining_settings();
    let expected_exp = if settings.len() == 2 { 2 } else { 1 };
    if d.order() != 1 || !settings.iter().all(|&n| n == 3) || settings.is_empty() || settings.len() > 2 {
        return Err(BellError::ShapeMismatch {
            expected: "order-1 delta over parties with 3 settings each".into(),
            found: format!("order {} over {:?}", d.order(), settings),
        });
    }
    if d.denom_exp() != expected_exp {
        return Err(BellError::DenominatorMismatch {
            expected: expected_exp,
            found: d.denom_exp(),
        });
    }
    let (canon, _) = canonical_form(settings, d.numerators(), false);
    Ok(index().get(&(settings.to_vec(), canon)).copied())
}

/// Size of a family's orbit under the relabelings of the remaining parties.
pub fn family_orbit_size(id: FamilyId) -> u64 {
    let fam = DeltaFamily::new(id);
    canonical_form(fam.representative.remaining_settings(), fam.representative.numerators(), false).1
}
