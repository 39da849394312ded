use modelacq::recommender::*;

fn main() {
    let t = Taxonomy::shipped();
    let r = recommend(&t.schema, &t.entries, &t.preferences).unwrap();
    let n = nearest_techniques(&r.assignment, &t.entries, DEFAULT_NEIGHBORS);
    print!("{}", Report::new(&t.schema, &t.entries, &r, &n).to_text());
}
