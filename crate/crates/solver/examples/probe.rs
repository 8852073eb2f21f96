use solver::*;

fn main() {
    let chain = GridChain::from_sizes(&[128]).unwrap();
    let origin = chain.state(chain.chain().origin());
    let xm = chain.chain().vertex_from_signs(&[-1]).unwrap();
    let xp = chain.chain().vertex_from_signs(&[1]).unwrap();
    let sm = chain.state(&xm);
    let sp = chain.state(&xp);
    println!("sm={sm} sp={sp} origin={origin}");
    println!("escape -: {:?}", escape_prob(&chain, sm, &[origin]));
    println!("escape +: {:?}", escape_prob(&chain, sp, &[origin]));
    let mean = mean_hitting_time(&chain, 5, &[sm, sp]).unwrap();
    for s in [-5.0, 0.5] {
        let u = s / mean;
        println!("tiny s={s}: {:?}", laplace_tiny(&chain, 5, sm, &[sp], u));
    }
}
