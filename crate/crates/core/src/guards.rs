//! Size guards for exact and exhaustive computations.

use crate::subset::MAX_GROUND;

/// Environment variable overriding [`Guards::ground`].
pub const GUARD_GROUND_ENV: &str = "COVLAB_GUARD_GROUND";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Ground-set cap for covering systems and dynamical instances.
    pub ground: usize,
    /// Ground-set cap for subfamily brute force (`complexity_bruteforce`,
    /// exhaustive `gamma`).
    pub bruteforce_ground: usize,
    /// Left-side cap for the subset enumeration in `deficiency_bound`.
    pub deficiency_left: usize,
    pub mu_ground: usize,
    pub mu_group: usize,
    pub omega_ground: usize,
    /// Maximum size of a generated permutation group.
    pub group_cap: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            ground: 64,
            bruteforce_ground: 12,
            deficiency_left: 20,
            mu_ground: 12,
            mu_group: 64,
            omega_ground: 5,
            group_cap: 5040,
        }
    }
}

impl Guards {
    /// Defaults, with `COVLAB_GUARD_GROUND` applied when set to a valid size.
    pub fn from_env() -> Self {
        let mut g = Guards::default();
        if let Ok(v) = std::env::var(GUARD_GROUND_ENV) {
            if let Ok(n) = v.trim().parse::<usize>() {
                g.ground = n.clamp(1, MAX_GROUND);
            }
        }
        g
    }
}
