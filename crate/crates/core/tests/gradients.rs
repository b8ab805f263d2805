mod oracles;

use oracles::{check_discriminator_gradient, check_generator_gradient, check_mlp_gradient};

#[test]
fn mlp_gradient_matches_central_differences() {
    let c = check_mlp_gradient(70, 50);
    assert!(c.passed(1e-4), "{c:?}");
}

#[test]
fn cgan_discriminator_gradient_matches_central_differences() {
    let c = check_discriminator_gradient(71, 50);
    assert!(c.passed(1e-4), "{c:?}");
}

#[test]
fn cgan_generator_gradient_matches_central_differences() {
    let c = check_generator_gradient(72, 50);
    assert!(c.passed(1e-4), "{c:?}");
}
