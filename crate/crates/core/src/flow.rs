//! Small unit-capacity max-flow (BFS augmenting paths), enough for the path
//! counting questions asked at desk scale.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub(crate) struct UnitFlow {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl UnitFlow {
    pub fn new(n: usize) -> Self {
        UnitFlow {
            head: vec![NIL; n],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: u32) {
        for (a, b, c) in [(u, v, cap), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    /// Max flow from `s` to `t`, stopping once `limit` is reached.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let n = self.head.len();
        let mut flow = 0;
        while flow < limit {
            let mut pred = vec![NIL; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                let mut a = self.head[u];
                while a != NIL {
                    let v = self.to[a];
                    if self.cap[a] > 0 && !seen[v] {
                        seen[v] = true;
                        pred[v] = a;
                        queue.push_back(v);
                    }
                    a = self.next[a];
                }
            }
            if !seen[t] {
                break;
            }
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                v = self.to[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_disjoint_routes() {
        let mut f = UnitFlow::new(4);
        f.add_arc(0, 1, 1);
        f.add_arc(0, 2, 1);
        f.add_arc(1, 3, 1);
        f.add_arc(2, 3, 1);
        f.add_arc(1, 2, 1);
        assert_eq!(f.max_flow(0, 3, 10), 2);
    }
}
