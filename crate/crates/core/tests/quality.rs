use axdse::accel::{synthetic, GrayImage, Synthetic};
use axdse::quality::{ssim, C1};

#[test]
fn constant_images_follow_closed_form() {
    for (mu, d) in [(0.0f64, 10.0f64), (100.0, 10.0), (240.0, 15.0), (50.0, 0.0)] {
        let x = GrayImage::filled(32, 24, mu as u8);
        let y = GrayImage::filled(32, 24, (mu + d) as u8);
        // Zero variance everywhere leaves only the luminance term.
        let expect = (2.0 * mu * (mu + d) + C1) / (mu * mu + (mu + d) * (mu + d) + C1);
        let got = ssim(&x, &y).unwrap();
        assert!((got - expect).abs() <= 1e-9, "mu {mu}: {got} vs {expect}");
    }
}

#[test]
fn self_similarity_and_symmetry() {
    let a = synthetic(Synthetic::Scene, 40, 40, 1);
    let b = synthetic(Synthetic::Noise { sigma: 30.0 }, 40, 40, 2);
    assert_eq!(ssim(&a, &a).unwrap(), 1.0);
    let flat = GrayImage::filled(40, 40, 9);
    assert_eq!(ssim(&flat, &flat).unwrap(), 1.0);
    let ab = ssim(&a, &b).unwrap();
    assert!((ab - ssim(&b, &a).unwrap()).abs() < 1e-12);
    assert!(ab < 0.9 && ab > -1.0);
    assert!(ssim(&a, &GrayImage::filled(20, 40, 0)).is_err());
}
