//! Exterior algebra over a coframe with structural differentials.
//!
//! A [`FrameSpace`] fixes an ordered basis of 1-forms (at most 30), the
//! exterior derivative of each basis form, and the differentials of the
//! fiber coordinates. Every other symbol is a constant. [`Form`]s are sparse
//! maps from basis multi-indices (bitmasks) to [`Scalar`](crate::Scalar)
//! coefficients and always belong to exactly one frame.

mod consistency;
mod form;
mod frame;

pub use consistency::{check_frame_consistency, ConsistencyReport};
pub use form::Form;
pub use frame::{FrameBuilder, FrameSpace, MAX_BASIS};

pub(crate) type Terms = std::collections::BTreeMap<u32, crate::Scalar>;

/// Sign of `e_a ∧ e_b` relative to the sorted product, zero when the
/// multi-indices overlap.
pub(crate) fn merge_sign(a: u32, b: u32) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn add_into(acc: &mut Terms, mask: u32, c: crate::Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_trivially_zero() {
        return;
    }
    match acc.entry(mask) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_trivially_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

pub(crate) fn wedge_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            match merge_sign(ma, mb) {
                0 => {}
                1 => add_into(&mut out, ma | mb, ca * cb),
                _ => add_into(&mut out, ma | mb, -(ca * cb)),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::merge_sign;

    #[test]
    fn signs() {
        assert_eq!(merge_sign(0b01, 0b10), 1);
        assert_eq!(merge_sign(0b10, 0b01), -1);
        assert_eq!(merge_sign(0b11, 0b01), 0);
        // e2 ∧ (e0 ∧ e1) = e0 ∧ e1 ∧ e2
        assert_eq!(merge_sign(0b100, 0b011), 1);
        // e1 ∧ (e0 ∧ e2) = -e0 ∧ e1 ∧ e2
        assert_eq!(merge_sign(0b010, 0b101), -1);
    }
}
