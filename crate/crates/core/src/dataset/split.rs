use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DatasetError;

/// Seeded shuffle, then the first `round(train_fraction * n)` items go to
/// the training side. Every item lands in exactly one side.
pub fn split_dataset<T>(items: Vec<T>, train_fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::TrainFraction(train_fraction));
    }
    let n = items.len();
    let n_train = (train_fraction * n as f64).round() as usize;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut is_train = vec![false; n];
    for &i in &order[..n_train] {
        is_train[i] = true;
    }

    let mut slots: Vec<Option<T>> = items.into_iter().map(Some).collect();
    let take = |slots: &mut Vec<Option<T>>, idx: &[usize]| -> Vec<T> {
        idx.iter().map(|&i| slots[i].take().expect("index used once")).collect()
    };
    let train = take(&mut slots, &order[..n_train]);
    let val = take(&mut slots, &order[n_train..]);
    Ok((train, val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eighty_twenty() {
        let (train, val) = split_dataset((0..10).collect::<Vec<_>>(), 0.8, 7).unwrap();
        assert_eq!((train.len(), val.len()), (8, 2));
    }

    #[test]
    fn single_item_rounds_up() {
        let (train, val) = split_dataset(vec!["a"], 0.8, 1).unwrap();
        assert_eq!((train.len(), val.len()), (1, 0));
    }

    #[test]
    fn empty_input() {
        let (train, val) = split_dataset(Vec::<u8>::new(), 0.8, 1).unwrap();
        assert!(train.is_empty() && val.is_empty());
    }

    #[test]
    fn rejects_bad_fraction() {
        for f in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(split_dataset(vec![1], f, 0).is_err());
        }
    }

    #[test]
    fn same_seed_same_partition() {
        let a = split_dataset((0..100).collect::<Vec<_>>(), 0.8, 42).unwrap();
        let b = split_dataset((0..100).collect::<Vec<_>>(), 0.8, 42).unwrap();
        assert_eq!(a, b);
        let c = split_dataset((0..100).collect::<Vec<_>>(), 0.8, 43).unwrap();
        assert_ne!(a, c);
    }

    proptest! {
        #[test]
        fn is_a_partition(n in 0usize..300, frac in 0.01..0.99f64, seed: u64) {
            let (train, val) = split_dataset((0..n).collect::<Vec<_>>(), frac, seed).unwrap();
            prop_assert_eq!(train.len(), (frac * n as f64).round() as usize);
            let mut all: Vec<usize> = train.into_iter().chain(val).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }
}
