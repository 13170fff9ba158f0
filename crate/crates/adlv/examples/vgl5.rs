fn main() {
    for q in [2u32, 3] {
        let t = std::time::Instant::now();
        match adlv::job::verify_gl5(q, 10_000_000) {
            Ok(v) => println!("q={q}: closed={} positions={} enum={} transl={} match={} closed_patch={} pass={} ({:?})",
                v.patch_closed_members, v.patch_positions_match, v.enumerated, v.translates_in_region,
                v.members_match_translates, v.closed_patch_count, v.pass(), t.elapsed()),
            Err(e) => println!("q={q}: ERROR {e}"),
        }
    }
}
