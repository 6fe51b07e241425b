use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::Channel;

use super::HopError;

/// A bijection on the channel labels `{1..=n}`, stored with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<Channel>,
    inverse: Vec<Channel>,
}

impl Permutation {
    pub fn identity(n: Channel) -> Self {
        let forward: Vec<Channel> = (1..=n).collect();
        Self {
            inverse: forward.clone(),
            forward,
        }
    }

    /// Uniform permutation from a Fisher–Yates shuffle driven by a ChaCha8
    /// generator seeded with `seed`. Deterministic per `(seed, n)`.
    pub fn from_seed(seed: u64, n: Channel) -> Self {
        let mut forward: Vec<Channel> = (1..=n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        forward.shuffle(&mut rng);
        Self::from_forward(forward).expect("a shuffled identity is a bijection")
    }

    /// Builds from an explicit forward map (`forward[i]` is the image of
    /// channel `i + 1`), validating that it is a bijection on `{1..=n}`.
    pub fn from_forward(forward: Vec<Channel>) -> Result<Self, HopError> {
        let n = forward.len();
        let mut inverse = vec![0 as Channel; n];
        for (i, &image) in forward.iter().enumerate() {
            if image == 0 || image as usize > n {
                return Err(HopError::NotABijection {
                    detail: format!("image {image} outside 1..={n}"),
                });
            }
            let slot = &mut inverse[image as usize - 1];
            if *slot != 0 {
                return Err(HopError::NotABijection {
                    detail: format!("image {image} repeated"),
                });
            }
            *slot = (i + 1) as Channel;
        }
        Ok(Self { forward, inverse })
    }

    pub fn n(&self) -> Channel {
        self.forward.len() as Channel
    }

    /// π(c)
    pub fn apply(&self, c: Channel) -> Channel {
        self.forward[c as usize - 1]
    }

    /// π⁻¹(c)
    pub fn invert(&self, c: Channel) -> Channel {
        self.inverse[c as usize - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_element_permutation_is_identity() {
        let p = Permutation::from_seed(12345, 1);
        assert_eq!(p.apply(1), 1);
    }

    #[test]
    fn same_seed_same_permutation() {
        assert_eq!(Permutation::from_seed(9, 16), Permutation::from_seed(9, 16));
    }

    #[test]
    fn seeded_permutation_is_a_bijection() {
        let p = Permutation::from_seed(7, 4);
        let mut image: Vec<Channel> = (1..=4).map(|c| p.apply(c)).collect();
        image.sort_unstable();
        assert_eq!(image, vec![1, 2, 3, 4]);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_seed(33, 12);
        for c in 1..=12 {
            assert_eq!(p.invert(p.apply(c)), c);
        }
    }

    #[test]
    fn invalid_forward_maps_are_rejected() {
        assert!(Permutation::from_forward(vec![1, 1]).is_err());
        assert!(Permutation::from_forward(vec![2, 3]).is_err());
        assert!(Permutation::from_forward(vec![0, 1]).is_err());
    }
}
