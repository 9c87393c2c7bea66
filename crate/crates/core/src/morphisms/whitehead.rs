//! Whitehead automorphisms and random automorphisms built from them.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Endomorphism;
use crate::word::{Letter, Word};

/// All Whitehead automorphisms of the second kind: a multiplier `m = a_k^{±1}`
/// fixed, every other generator `x` sent to one of `x`, `xm`, `m⁻¹x`, `m⁻¹xm`,
/// excluding the identity.
pub fn whitehead_moves(rank: usize) -> Vec<Endomorphism> {
    let mut out = Vec::new();
    if rank < 2 {
        return out;
    }
    let choices = 4usize.pow(rank as u32 - 1);
    for k in 1..=rank {
        for inv in [false, true] {
            let m = Word::from_reduced(rank, vec![Letter::new(k, inv)]);
            for code in 1..choices {
                out.push(whitehead_move(rank, k, &m, code));
            }
        }
    }
    out
}

fn whitehead_move(rank: usize, k: usize, m: &Word, mut code: usize) -> Endomorphism {
    let mi = m.inverse();
    let images = (1..=rank)
        .map(|i| {
            let x = Word::generator(rank, i).expect("in range");
            if i == k {
                return x;
            }
            let c = code % 4;
            code /= 4;
            match c {
                0 => x,
                1 => x.mul(m),
                2 => mi.mul(&x),
                _ => mi.mul(&x).mul(m),
            }
        })
        .collect();
    Endomorphism::new(rank, images).expect("well formed")
}

/// A product of `moves` random Whitehead moves, a random permutation of the
/// generators and random inversions.
pub fn random_automorphism<R: Rng + ?Sized>(
    rng: &mut R,
    rank: usize,
    moves: usize,
) -> Endomorphism {
    let mut perm: Vec<usize> = (1..=rank).collect();
    perm.shuffle(rng);
    let images = perm
        .iter()
        .map(|&i| {
            let g = Word::generator(rank, i).expect("in range");
            if rng.gen_bool(0.5) {
                g.inverse()
            } else {
                g
            }
        })
        .collect();
    let mut f = Endomorphism::new(rank, images).expect("well formed");
    if rank < 2 {
        return f;
    }
    let choices = 4usize.pow(rank as u32 - 1);
    for _ in 0..moves {
        let k = rng.gen_range(1..=rank);
        let m = Word::from_reduced(rank, vec![Letter::new(k, rng.gen_bool(0.5))]);
        let w = whitehead_move(rank, k, &m, rng.gen_range(1..choices));
        f = f.compose(&w).expect("same rank");
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moves_are_automorphisms() {
        let moves = whitehead_moves(3);
        assert_eq!(moves.len(), 6 * 15);
        assert!(moves.iter().all(Endomorphism::is_automorphism));
        assert!(!moves.contains(&Endomorphism::identity(3)));
    }

    #[test]
    fn random_automorphisms_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_automorphism(&mut rng, 3, 5);
            assert!(f.is_automorphism());
            let g = f.invert().unwrap();
            assert_eq!(f.compose(&g).unwrap(), Endomorphism::identity(3));
        }
    }
}
