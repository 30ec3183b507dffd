//! Trees `K_t` over the diagonal pairing, placed words, and the sets built on them.

pub mod calculus;
pub mod placed;
pub mod sets;

pub use calculus::{
    block_target, canonical_point, kt_constraints, kt_member, kt_prefix_consistent,
    kt_split_member, ktn_member, phi_t, phi_t_inverse, phi_t_word, sigma_offsets, KtShape,
    Offsets,
};
pub use placed::{
    decode_bits, eps_of, mirror, placed_decode, placed_decode_oracle, pred, pred_l, pred_len,
    Decoded, OracleTables, PlacedInfo,
};
pub use sets::{
    a3_is_edge, density_witness_ht, density_witness_x3, find_ktn_in_cylinder, g_is_edge,
    h_member, h_tilde_image_member, h_tilde_member, kt_partition_member,
    kt_partition_member_with, ktn_inside_cylinder, witness_chain, x3_member, Certificate,
    Tristate, Verdict,
};
