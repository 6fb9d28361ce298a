use aes_core::{decrypt_block, encrypt_block, expand_key, Block128};
use cipher_modes::{
    cbc_decrypt, cbc_encrypt, ctr, ecb, process, uses_engine, Direction, Mode, ModeContext,
    ModeError, ModeParams, PaddingPolicy,
};
use dispatch_engine::{BackendId, Engine};
use grid_model::{ctr_state, GridDims};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn params(mode: Mode, direction: Direction, key_len: usize) -> ModeParams {
    ModeParams {
        mode,
        direction,
        key: (0..key_len as u8).collect(),
        iv: Some(Block128::new(0x0102_0304, 0x0506_0708, 0x090a_0b0c, 0x0d0e_0f10)),
        padding: PaddingPolicy::None,
    }
}

fn random_bytes(rng: &mut StdRng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random()).collect()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn ecb_single_block_known_answer() {
    let engine = Engine::new();
    let plaintext: Vec<u8> = vec![
        0x00, 0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88, 0x99, 0xaa, 0xbb, 0xcc, 0xdd, 0xee,
        0xff,
    ];
    let p = params(Mode::Ecb, Direction::Encrypt, 16);
    for backend in [BackendId::Reference, BackendId::Parallel] {
        let ctx = ModeContext::new(&engine, backend);
        let ct = ecb(&ctx, &plaintext, &p).unwrap();
        assert_eq!(hex(&ct), "69c4e0d86a7b0430d8cdb78070b4c55a");
    }
}

#[test]
fn ecb_is_deterministic_per_block() {
    let engine = Engine::new();
    let ctx = ModeContext::new(&engine, BackendId::Parallel);
    let p = params(Mode::Ecb, Direction::Encrypt, 16);
    let two_equal_blocks = [[0x5au8; 16], [0x5au8; 16]].concat();
    let ct = ecb(&ctx, &two_equal_blocks, &p).unwrap();
    assert_eq!(ct[..16], ct[16..32]);
}

#[test]
fn ecb_roundtrips_across_chunks() {
    let engine = Engine::new();
    // 2x2 grid: 64-byte chunks force multi-dispatch on anything bigger.
    let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, GridDims::new(2, 2));
    let mut rng = StdRng::seed_from_u64(10);
    let data = random_bytes(&mut rng, 16 * 11); // 11 blocks over 4-block grids: 3 chunks
    let ct = ecb(&ctx, &data, &params(Mode::Ecb, Direction::Encrypt, 24)).unwrap();
    assert_ne!(ct, data);
    let pt = ecb(&ctx, &ct, &params(Mode::Ecb, Direction::Decrypt, 24)).unwrap();
    assert_eq!(pt, data);
}

#[test]
fn ctr_is_an_involution_on_any_length() {
    let engine = Engine::new();
    let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, GridDims::new(4, 2));
    let mut rng = StdRng::seed_from_u64(11);
    for len in [0usize, 1, 15, 16, 17, 100, 16 * 9, 1000] {
        let data = random_bytes(&mut rng, len);
        let p = params(Mode::Ctr, Direction::Encrypt, 32);
        let ct = ctr(&ctx, &data, &p).unwrap();
        assert_eq!(ct.len(), len);
        let pt = ctr(&ctx, &ct, &p).unwrap();
        assert_eq!(pt, data, "length {len}");
    }
}

#[test]
fn ctr_chunked_matches_single_dispatch() {
    let engine = Engine::new();
    let mut rng = StdRng::seed_from_u64(12);
    let data = random_bytes(&mut rng, 16 * 50 + 7);
    let p = params(Mode::Ctr, Direction::Encrypt, 16);
    let one_grid = ModeContext::with_dims(&engine, BackendId::Reference, GridDims::new(64, 64));
    let tiny_grids = ModeContext::with_dims(&engine, BackendId::Reference, GridDims::new(2, 2));
    assert_eq!(
        ctr(&one_grid, &data, &p).unwrap(),
        ctr(&tiny_grids, &data, &p).unwrap()
    );
}

#[test]
fn ctr_keystream_is_the_encrypted_counter() {
    let engine = Engine::new();
    let ctx = ModeContext::new(&engine, BackendId::Reference);
    let mut p = params(Mode::Ctr, Direction::Encrypt, 16);
    p.iv = Some(Block128::ZERO);
    let out = ctr(&ctx, &[0u8; 16], &p).unwrap();
    let schedule = expand_key(&p.key).unwrap();
    let keystream = encrypt_block(
        ctr_state(Block128::ZERO, 0),
        &schedule,
        aes_core::tables(),
    );
    assert_eq!(out, keystream.to_bytes());
}

/// Sequential CBC decryption straight from the definition.
fn sequential_cbc_decrypt(data: &[u8], key: &[u8], iv: Block128) -> Vec<u8> {
    let schedule = expand_key(key).unwrap();
    let tables = aes_core::tables();
    let mut previous = iv;
    let mut out = Vec::with_capacity(data.len());
    for chunk in data.chunks_exact(16) {
        let block = Block128::from_bytes(chunk.try_into().unwrap());
        out.extend_from_slice(&(decrypt_block(block, &schedule, tables) ^ previous).to_bytes());
        previous = block;
    }
    out
}

#[test]
fn cbc_roundtrips_a_ten_thousand_block_message() {
    let engine = Engine::new();
    let ctx = ModeContext::new(&engine, BackendId::Parallel);
    let mut rng = StdRng::seed_from_u64(18);
    let data = random_bytes(&mut rng, 10_000 * 16);
    let p = params(Mode::Cbc, Direction::Encrypt, 32);
    let ct = cbc_encrypt(&data, &p).unwrap();
    let pt = cbc_decrypt(&ctx, &ct, &params(Mode::Cbc, Direction::Decrypt, 32)).unwrap();
    assert_eq!(pt, data);
}

#[test]
fn cbc_roundtrips_with_padding() {
    let engine = Engine::new();
    let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, GridDims::new(3, 3));
    let mut rng = StdRng::seed_from_u64(13);
    for len in [0usize, 5, 16, 31, 16 * 20] {
        let data = random_bytes(&mut rng, len);
        let mut enc = params(Mode::Cbc, Direction::Encrypt, 16);
        enc.padding = PaddingPolicy::Pkcs7;
        let mut dec = params(Mode::Cbc, Direction::Decrypt, 16);
        dec.padding = PaddingPolicy::Pkcs7;
        let ct = cbc_encrypt(&data, &enc).unwrap();
        let pt = cbc_decrypt(&ctx, &ct, &dec).unwrap();
        assert_eq!(pt, data, "length {len}");
    }
}

#[test]
fn cbc_single_block_is_decrypt_xor_iv() {
    let engine = Engine::new();
    let ctx = ModeContext::new(&engine, BackendId::Reference);
    let p = params(Mode::Cbc, Direction::Decrypt, 16);
    let ct = [0x77u8; 16];
    let out = cbc_decrypt(&ctx, &ct, &p).unwrap();
    let schedule = expand_key(&p.key).unwrap();
    let expected =
        decrypt_block(Block128::from_bytes(&ct), &schedule, aes_core::tables()) ^ p.iv.unwrap();
    assert_eq!(out, expected.to_bytes());
}

#[test]
fn cbc_multichunk_matches_the_sequential_oracle() {
    let engine = Engine::new();
    // 2x2 grid forces the IV handoff between chunks.
    let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, GridDims::new(2, 2));
    let mut rng = StdRng::seed_from_u64(14);
    let ciphertext = random_bytes(&mut rng, 16 * 23);
    let p = params(Mode::Cbc, Direction::Decrypt, 32);
    assert_eq!(
        cbc_decrypt(&ctx, &ciphertext, &p).unwrap(),
        sequential_cbc_decrypt(&ciphertext, &p.key, p.iv.unwrap())
    );
}

#[test]
fn cbc_corruption_stays_local() {
    let engine = Engine::new();
    let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, GridDims::new(4, 4));
    let mut rng = StdRng::seed_from_u64(15);
    let plain = random_bytes(&mut rng, 16 * 12);
    let enc = params(Mode::Cbc, Direction::Encrypt, 16);
    let dec = params(Mode::Cbc, Direction::Decrypt, 16);
    let ct = cbc_encrypt(&plain, &enc).unwrap();

    for corrupt_at in [0usize, 5, 10, 11] {
        let mut damaged = ct.clone();
        damaged[16 * corrupt_at] ^= 0x80;
        let out = cbc_decrypt(&ctx, &damaged, &dec).unwrap();
        for block in 0..12 {
            let expect_damage = block == corrupt_at || block == corrupt_at + 1;
            assert_eq!(
                out[16 * block..16 * block + 16] != plain[16 * block..16 * block + 16],
                expect_damage,
                "corrupted {corrupt_at}, inspected {block}"
            );
        }
    }
}

#[test]
fn capability_matrix_routes_exactly_one_pair_off_the_engine() {
    assert!(uses_engine(Mode::Ecb, Direction::Encrypt));
    assert!(uses_engine(Mode::Ecb, Direction::Decrypt));
    assert!(uses_engine(Mode::Ctr, Direction::Encrypt));
    assert!(uses_engine(Mode::Ctr, Direction::Decrypt));
    assert!(uses_engine(Mode::Cbc, Direction::Decrypt));
    assert!(!uses_engine(Mode::Cbc, Direction::Encrypt));

    // Backend instrumentation: the engine's dispatch counter moves for
    // the five engine pairs and stays put for CBC encryption.
    let engine = Engine::new();
    let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, GridDims::new(2, 2));
    let data = [3u8; 64];
    for (mode, direction) in [
        (Mode::Ecb, Direction::Encrypt),
        (Mode::Ecb, Direction::Decrypt),
        (Mode::Ctr, Direction::Encrypt),
        (Mode::Ctr, Direction::Decrypt),
        (Mode::Cbc, Direction::Decrypt),
    ] {
        let before = engine.dispatch_count();
        process(&ctx, &data, &params(mode, direction, 16)).unwrap();
        assert!(
            engine.dispatch_count() > before,
            "{mode}/{direction} should dispatch"
        );
    }
    let before = engine.dispatch_count();
    process(&ctx, &data, &params(Mode::Cbc, Direction::Encrypt, 16)).unwrap();
    assert_eq!(engine.dispatch_count(), before, "cbc/enc must stay on host");
}

#[test]
fn outputs_are_independent_of_grid_size() {
    let engine = Engine::new();
    let mut rng = StdRng::seed_from_u64(16);
    let data = random_bytes(&mut rng, 16 * 37);
    let grids = [GridDims::new(2, 2), GridDims::new(8, 8), GridDims::new(64, 64)];
    for (mode, direction) in [
        (Mode::Ecb, Direction::Encrypt),
        (Mode::Ecb, Direction::Decrypt),
        (Mode::Ctr, Direction::Encrypt),
        (Mode::Ctr, Direction::Decrypt),
        (Mode::Cbc, Direction::Decrypt),
    ] {
        let p = params(mode, direction, 16);
        let outputs: Vec<Vec<u8>> = grids
            .iter()
            .map(|&dims| {
                let ctx = ModeContext::with_dims(&engine, BackendId::Parallel, dims);
                process(&ctx, &data, &p).unwrap()
            })
            .collect();
        assert_eq!(outputs[0], outputs[1], "{mode}/{direction}");
        assert_eq!(outputs[0], outputs[2], "{mode}/{direction}");
    }
}

#[test]
fn reference_and_parallel_agree_for_every_engine_pair() {
    let engine = Engine::new();
    let mut rng = StdRng::seed_from_u64(17);
    let data = random_bytes(&mut rng, 16 * 29);
    for (mode, direction) in [
        (Mode::Ecb, Direction::Encrypt),
        (Mode::Ecb, Direction::Decrypt),
        (Mode::Ctr, Direction::Encrypt),
        (Mode::Ctr, Direction::Decrypt),
        (Mode::Cbc, Direction::Decrypt),
    ] {
        let p = params(mode, direction, 24);
        let dims = GridDims::new(4, 4);
        let reference = process(
            &ModeContext::with_dims(&engine, BackendId::Reference, dims),
            &data,
            &p,
        )
        .unwrap();
        let parallel = process(
            &ModeContext::with_dims(&engine, BackendId::Parallel, dims),
            &data,
            &p,
        )
        .unwrap();
        assert_eq!(reference, parallel, "{mode}/{direction}");
    }
}

#[test]
fn usage_errors_are_reported() {
    let engine = Engine::new();
    let ctx = ModeContext::new(&engine, BackendId::Reference);

    let mut no_iv = params(Mode::Ctr, Direction::Encrypt, 16);
    no_iv.iv = None;
    assert!(matches!(
        ctr(&ctx, &[0u8; 16], &no_iv),
        Err(ModeError::MissingIv(Mode::Ctr))
    ));

    let misaligned = params(Mode::Ecb, Direction::Encrypt, 16);
    assert!(matches!(
        ecb(&ctx, &[0u8; 15], &misaligned),
        Err(ModeError::NotBlockAligned(15))
    ));

    let mut bad_key = params(Mode::Ecb, Direction::Encrypt, 16);
    bad_key.key = vec![0u8; 17];
    assert!(matches!(
        ecb(&ctx, &[0u8; 16], &bad_key),
        Err(ModeError::Aes(_))
    ));

    let mut dec = params(Mode::Cbc, Direction::Decrypt, 16);
    dec.padding = PaddingPolicy::Pkcs7;
    // Valid ciphertext of garbage is overwhelmingly unlikely to carry
    // valid padding under a mismatched key.
    let garbage = [0xffu8; 32];
    assert!(matches!(
        cbc_decrypt(&ctx, &garbage, &dec),
        Err(ModeError::BadPadding)
    ));
}
