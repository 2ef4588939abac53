/// Integer vectors of max-norm exactly `s`, first nonzero entry positive,
/// in "simplest first" order: lexicographic in the entry ranking
/// `0, 1, −1, 2, −2, …`.
#[derive(Clone, Debug)]
pub struct ShellIter {
    ladder: Vec<i64>,
    idx: Vec<usize>,
    s: i64,
    done: bool,
}

impl ShellIter {
    /// `allow_zero = false` restricts to vectors with every entry nonzero.
    pub fn new(n: usize, s: u32, allow_zero: bool) -> Self {
        let s = s as i64;
        let mut ladder = Vec::with_capacity(2 * s as usize + 1);
        if allow_zero {
            ladder.push(0);
        }
        for k in 1..=s {
            ladder.push(k);
            ladder.push(-k);
        }
        ShellIter {
            done: n == 0 || ladder.is_empty(),
            idx: vec![0; n],
            ladder,
            s,
        }
    }

    fn advance(&mut self) {
        let mut i = self.idx.len();
        loop {
            if i == 0 {
                self.done = true;
                return;
            }
            i -= 1;
            self.idx[i] += 1;
            if self.idx[i] < self.ladder.len() {
                return;
            }
            self.idx[i] = 0;
        }
    }
}

impl Iterator for ShellIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while !self.done {
            let v: Vec<i64> = self.idx.iter().map(|&i| self.ladder[i]).collect();
            self.advance();
            let on_shell = v.iter().any(|x| x.abs() == self.s);
            let oriented = v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
            if on_shell && oriented {
                return Some(v);
            }
        }
        None
    }
}
