mod common;

use molprompt::augmentation::{f1_score, run_augmentation_experiment, AugmentError, AugmentationConfig};

use common::*;

fn quick(pseudo_counts: Vec<usize>, trials: usize) -> AugmentationConfig {
    AugmentationConfig {
        target: "sulfonamide".into(),
        pseudo_counts,
        trials,
        seed: 11,
        ..AugmentationConfig::default()
    }
}

#[test]
fn f1_examples() {
    assert!((f1_score(&[true, true, false, true], &[true, true, true, false]).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(f1_score(&[true], &[true]).unwrap(), 1.0);
    assert!(matches!(f1_score(&[true], &[true, false]), Err(AugmentError::LengthMismatch(1, 2))));
    assert!(matches!(f1_score(&[], &[]), Err(AugmentError::Empty)));
}

#[test]
fn experiment_is_bit_reproducible_and_nested() {
    let (labeled, pool) = substructure_task("sulfonamide");
    let a = run_augmentation_experiment(&labeled, &pool, &quick(vec![0, 20, 40], 6)).unwrap();
    let b = run_augmentation_experiment(&labeled, &pool, &quick(vec![0, 20, 40], 6)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trial_f1.len(), 6);
    assert!(a.trial_f1.iter().all(|t| t.len() == 3));
    let only_zero = run_augmentation_experiment(&labeled, &pool, &quick(vec![0], 6)).unwrap();
    let col0: Vec<f64> = a.trial_f1.iter().map(|t| t[0]).collect();
    let solo: Vec<f64> = only_zero.trial_f1.iter().map(|t| t[0]).collect();
    assert_eq!(col0, solo);
    let row = a.row(0).unwrap();
    assert!((row.mean_f1 - col0.iter().sum::<f64>() / 6.0).abs() < 1e-12);
    assert!(a.plot_tsv().lines().count() >= 3);
}

#[test]
fn pseudo_samples_help_on_the_separable_task() {
    let (labeled, pool) = substructure_task("sulfonamide");
    let r = run_augmentation_experiment(&labeled, &pool, &quick(vec![0, 100], 10)).unwrap();
    assert!(r.row(100).unwrap().mean_f1 >= r.row(0).unwrap().mean_f1 - 0.02);
}

#[test]
fn config_and_pool_errors() {
    let (labeled, pool) = substructure_task("sulfonamide");
    let bad_configs = [
        AugmentationConfig { split: (0.5, 0.5, 0.5), ..quick(vec![0], 1) },
        AugmentationConfig { split: (0.0, 0.5, 0.5), ..quick(vec![0], 1) },
        quick(vec![0], 0),
        quick(vec![], 1),
        quick(vec![50, 10], 1),
        AugmentationConfig { l2_grid: vec![], ..quick(vec![0], 1) },
    ];
    for c in bad_configs {
        assert!(matches!(run_augmentation_experiment(&labeled, &pool, &c), Err(AugmentError::InvalidConfig(_))));
    }
    assert!(matches!(
        run_augmentation_experiment(&labeled, &pool[..10], &quick(vec![0, 50], 1)),
        Err(AugmentError::InsufficientPseudoPool { .. })
    ));
    let bad_pool = vec!["C1CC".to_string(); 60];
    assert!(matches!(
        run_augmentation_experiment(&labeled, &bad_pool, &quick(vec![0, 50], 1)),
        Err(AugmentError::InvalidPseudoSample(_))
    ));
}
