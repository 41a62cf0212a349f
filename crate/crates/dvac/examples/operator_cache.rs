//! Persist assembled current-mode operators to a keyed on-disk store and
//! reload them in a fresh bank.  Keys hash the full build configuration, the
//! store refuses files from a different format version instead of silently
//! reusing them, and a warm run reproduces the cold assembly bit for bit.
//!
//!     cargo run --example operator_cache

use std::sync::Arc;

use dvac::cache::OperatorCache;
use dvac::coeff::XLaurent;
use dvac::dva::CurrentBank;
use dvac::fock::{FockSpace, Sector};

fn main() {
    let dir = std::env::temp_dir().join("dvac-operator-cache-example");
    let cache = OperatorCache::new(&dir).expect("store directory is writable");

    let lambda = 4;
    let x_cap = 60;
    let space = Arc::new(FockSpace::enumerate(Sector::NS, lambda));

    // cold run: assemble a few modes and persist them
    let cold = CurrentBank::<XLaurent>::new((), space.clone(), x_cap);
    for k in -2..=2 {
        let _ = cold.wedge(k);
    }
    let written = cold.persist_wedges(&cache).expect("store accepts exact operators");
    println!("cold bank assembled modes -2..=2 and wrote {written} operators to");
    println!("  {}", cache.dir().display());

    // warm run: a fresh bank preloads instead of reassembling
    let warm = CurrentBank::<XLaurent>::new((), space, x_cap);
    let loaded = warm.preload_wedges(&cache, -2..=2).expect("store files verify");
    println!("warm bank preloaded {loaded} operators from disk");
    assert_eq!(loaded, written);

    // the loaded operators are the assembled ones, entry for entry
    for k in -2..=2 {
        let a = cold.wedge(k);
        let b = warm.wedge(k);
        assert_eq!(*a, *b, "warm mode {k} must equal the cold assembly exactly");
    }
    println!("warm operators equal cold assembly entry for entry ✓");

    // get_or_build reports whether the store already had the key
    let key = cold.disk_key(1);
    let (_, was_cached) = cache
        .get_or_build(&key, || panic!("must not rebuild a cached operator"))
        .expect("lookup succeeds");
    assert!(was_cached);
    println!("keyed lookup hit the store without rebuilding ✓ (key {})", key.file_name());
}
