/// Nonzero integer vectors in the box `[-bound, bound]^dim`, one per line
/// (first nonzero coordinate positive), in a fixed order:
///
/// 1. increasing max-abs coefficient (the "shell"),
/// 2. then increasing support size,
/// 3. then lexicographically by support positions,
/// 4. then lexicographically by values, ordered `1, -1, 2, -2, …`.
#[derive(Clone, Debug)]
pub struct ShellVectors {
    dim: usize,
    bound: u32,
    shell: u32,
    weight: usize,
    support: Vec<usize>,
    values: Vec<usize>,
    started: bool,
    done: bool,
}

impl ShellVectors {
    pub fn new(dim: usize, bound: u32) -> Self {
        Self {
            dim,
            bound,
            shell: 1,
            weight: 1,
            support: vec![0],
            values: vec![0],
            started: false,
            done: dim == 0 || bound == 0,
        }
    }

    /// Current shell (max-abs coefficient) of the most recently yielded vector.
    pub fn shell(&self) -> u32 {
        self.shell
    }

    fn value_of(idx: usize) -> i64 {
        let mag = (idx / 2 + 1) as i64;
        if idx % 2 == 0 {
            mag
        } else {
            -mag
        }
    }

    fn emit(&self) -> Vec<i64> {
        let mut v = vec![0; self.dim];
        for (&pos, &vi) in self.support.iter().zip(&self.values) {
            v[pos] = Self::value_of(vi);
        }
        v
    }

    fn in_shell(&self) -> bool {
        let top = 2 * self.shell as usize - 2;
        self.values.iter().any(|&v| v >= top)
    }

    /// Odometer over values; the first coordinate only takes positive values.
    fn advance_values(&mut self) -> bool {
        let n_vals = 2 * self.shell as usize;
        for p in (0..self.values.len()).rev() {
            let step = if p == 0 { 2 } else { 1 };
            if self.values[p] + step < n_vals {
                self.values[p] += step;
                for q in p + 1..self.values.len() {
                    self.values[q] = 0;
                }
                return true;
            }
        }
        false
    }

    fn advance_support(&mut self) -> bool {
        let w = self.support.len();
        for p in (0..w).rev() {
            if self.support[p] < self.dim - (w - p) {
                self.support[p] += 1;
                for q in p + 1..w {
                    self.support[q] = self.support[q - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn reset_values(&mut self) {
        self.values = vec![0; self.weight];
    }

    fn step(&mut self) -> bool {
        if self.advance_values() {
            return true;
        }
        self.reset_values();
        if self.advance_support() {
            return true;
        }
        if self.weight < self.dim {
            self.weight += 1;
        } else if self.shell < self.bound {
            self.shell += 1;
            self.weight = 1;
        } else {
            return false;
        }
        self.support = (0..self.weight).collect();
        self.reset_values();
        true
    }
}

impl Iterator for ShellVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        loop {
            if self.started {
                if !self.step() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.in_shell() {
                return Some(self.emit());
            }
        }
    }
}
