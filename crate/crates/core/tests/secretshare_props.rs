use maskbench::qcore::random::uniform_ball;
use maskbench::qcore::trace_distance;
use maskbench::secretshare::{
    bloch_to_hsl, bloch_to_rgb, hsl_to_bloch, read_ppm, reconstruct_image, reconstruct_pixel, rgb_to_bloch,
    share_image, share_pixel, write_ppm, ColorRGB, MaskerId, RgbImage, ShareFile,
};
use maskbench::BlochVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn codec_round_trip(px: [u8; 3]) -> [u8; 3] {
    let v = rgb_to_bloch(&ColorRGB::from_u8(px));
    let hsl = bloch_to_hsl(&v).unwrap();
    bloch_to_rgb(&hsl_to_bloch(&hsl)).unwrap().to_u8()
}

#[test]
fn codec_is_bijective_on_sampled_colours() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let corners = (0..8u8).map(|b| [(b >> 2 & 1) * 255, (b >> 1 & 1) * 255, (b & 1) * 255]);
    let random = (0..100_000).map(|_| [rng.random::<u8>(), rng.random::<u8>(), rng.random::<u8>()]);
    for px in corners.chain(random) {
        let back = codec_round_trip(px);
        for ch in 0..3 {
            assert!(px[ch].abs_diff(back[ch]) <= 2, "{px:?} -> {back:?}");
        }
    }
}

#[test]
fn one_share_reveals_only_its_coordinate() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let wz = 0.35;
    let rim = (1.0f64 - wz * wz).sqrt();
    let reference = share_pixel(&BlochVector::new(0.0, 0.0, wz)).unwrap();
    for _ in 0..100 {
        let r = rim * rng.random::<f64>().sqrt();
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let s = share_pixel(&BlochVector::new(r * phi.cos(), r * phi.sin(), wz)).unwrap();
        assert!(trace_distance(s[2].marginal(), reference[2].marginal()).unwrap() < 1e-12);
    }
}

#[test]
fn sharing_disks_are_orthogonal() {
    let normals: Vec<[f64; 3]> = MaskerId::ALL
        .iter()
        .map(|id| match id.masker().label() {
            maskbench::MaskerLabel::QubitAlphaTheta { alpha, theta } => {
                maskbench::maskers::normal_from_angles(*alpha, *theta)
            }
            other => panic!("unexpected masker {other:?}"),
        })
        .collect();
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for (n, a) in normals.iter().zip(axes) {
        let dot: f64 = n.iter().zip(a).map(|(x, y)| x * y).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12, "{n:?}");
    }
}

proptest! {
    #[test]
    fn pixel_round_trip_including_mixed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = uniform_ball(&mut rng);
        let [a, b, c] = share_pixel(&v).unwrap();
        prop_assert!(reconstruct_pixel(&b, &c, &a).unwrap().distance(&v) < 1e-12);
    }

    #[test]
    fn hsl_round_trip_away_from_axis(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = uniform_ball(&mut rng);
        prop_assume!((v.x * v.x + v.y * v.y).sqrt() >= 1e-8 && v.z.abs() <= 1.0 - 1e-8);
        let back = hsl_to_bloch(&bloch_to_hsl(&v).unwrap());
        prop_assert!(back.distance(&v) < 1e-12);
    }

    #[test]
    fn image_and_files_round_trip(w in 1u32..6, h in 1u32..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels = (0..w * h).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
        let img = RgbImage::new(w, h, pixels).unwrap();
        let mut ppm = Vec::new();
        write_ppm(&img, &mut ppm).unwrap();
        prop_assert_eq!(&read_ppm(ppm.as_slice()).unwrap(), &img);

        let shares = share_image(&img).unwrap();
        let reloaded: Vec<ShareFile> = shares.iter().map(|s| ShareFile::from_bytes(&s.to_bytes()).unwrap()).collect();
        prop_assert_eq!(&reloaded[..], &shares[..]);
        let rec = reconstruct_image([&reloaded[2], &reloaded[0], &reloaded[1]], Some(&img)).unwrap();
        prop_assert!(rec.tampered.is_empty());
        prop_assert!(rec.comparison.unwrap().max_channel_error <= 2.0 / 255.0 + 1e-15);
    }
}
