pub mod gamma;
pub mod pair_flag;
pub mod pushforward;
pub mod rank1;

pub use gamma::{gamma_d, gamma_v, gamma_v_map, section_map, sections, GammaD, GammaV, NodeData};
pub use pair_flag::{fp_comparison, functor_f, functor_p, same_module};
pub use pushforward::{
    adapted_counit, adapted_unit, apply_e, apply_e_map, canonical_pi_structure, is_p_module,
    lambda, pi_shriek, pi_shriek_e, pi_shriek_e_map, pi_shriek_e_rings, pi_shriek_map, pi_star,
    push_rings, Adapted, PiStructure, Projection, Pushforward, SpanCertificate,
};
pub use rank1::{
    connected_round_trip, hand_built_objects, rank1_e, rank1_gamma_qd, rejected_objects,
    strictness_witness, toral_round_trip, AeFamily, ConnectedObject, GammaQd, Rank1, ScalarFamily,
    Slot, Stalk, ToralObject,
};
