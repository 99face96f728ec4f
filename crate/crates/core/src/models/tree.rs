//! Binary decision trees shared by the forest and the booster: array-backed
//! nodes carrying training sample counts for path-dependent attribution.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LeafValue {
    /// Scalar score (boosted regression leaf; learning rate already applied).
    Score(f64),
    /// Class distribution (forest leaf), indexed like the model class list.
    Distribution(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Branch { feature: usize, threshold: f64, left: usize, right: usize, n_samples: f64 },
    Leaf { value: LeafValue, n_samples: f64 },
}

impl TreeNode {
    pub fn n_samples(&self) -> f64 {
        match self {
            TreeNode::Branch { n_samples, .. } | TreeNode::Leaf { n_samples, .. } => *n_samples,
        }
    }
}

/// Rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn root(&self) -> usize {
        0
    }

    /// Index of the leaf a row lands in.
    pub fn leaf_for(&self, row: &[f64]) -> usize {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Leaf { .. } => return idx,
                TreeNode::Branch { feature, threshold, left, right, .. } => {
                    idx = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Scalar output for a row: the leaf score, or the leaf distribution
    /// projected onto `class_slot`.
    pub fn output_for(&self, row: &[f64], class_slot: usize) -> f64 {
        self.leaf_value(self.leaf_for(row), class_slot)
    }

    pub fn leaf_value(&self, node: usize, class_slot: usize) -> f64 {
        match &self.nodes[node] {
            TreeNode::Leaf { value: LeafValue::Score(s), .. } => *s,
            TreeNode::Leaf { value: LeafValue::Distribution(d), .. } => d[class_slot],
            TreeNode::Branch { .. } => panic!("leaf_value on a branch"),
        }
    }

    /// Cover-weighted expectation of the tree output (class projection for
    /// distribution leaves).
    pub fn expectation(&self, class_slot: usize) -> f64 {
        self.expectation_from(0, class_slot)
    }

    fn expectation_from(&self, node: usize, class_slot: usize) -> f64 {
        match &self.nodes[node] {
            TreeNode::Leaf { .. } => self.leaf_value(node, class_slot),
            TreeNode::Branch { left, right, n_samples, .. } => {
                let wl = self.nodes[*left].n_samples() / n_samples;
                let wr = self.nodes[*right].n_samples() / n_samples;
                wl * self.expectation_from(*left, class_slot)
                    + wr * self.expectation_from(*right, class_slot)
            }
        }
    }

    pub fn max_depth(&self) -> usize {
        self.depth_from(0)
    }

    fn depth_from(&self, node: usize) -> usize {
        match &self.nodes[node] {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Branch { left, right, .. } => {
                1 + self.depth_from(*left).max(self.depth_from(*right))
            }
        }
    }

    /// Parent sample counts must equal the sum over children.
    pub fn check_sample_counts(&self) -> bool {
        self.nodes.iter().all(|n| match n {
            TreeNode::Leaf { .. } => true,
            TreeNode::Branch { left, right, n_samples, .. } => {
                (self.nodes[*left].n_samples() + self.nodes[*right].n_samples() - n_samples).abs()
                    < 1e-9
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stump: x0 <= 0.5 ? -1 : +1, covers 10 = 6 + 4.
    pub(crate) fn stump() -> DecisionTree {
        DecisionTree {
            nodes: vec![
                TreeNode::Branch { feature: 0, threshold: 0.5, left: 1, right: 2, n_samples: 10.0 },
                TreeNode::Leaf { value: LeafValue::Score(-1.0), n_samples: 6.0 },
                TreeNode::Leaf { value: LeafValue::Score(1.0), n_samples: 4.0 },
            ],
        }
    }

    #[test]
    fn traversal_and_expectation() {
        let t = stump();
        assert_eq!(t.output_for(&[0.0], 0), -1.0);
        assert_eq!(t.output_for(&[0.5], 0), -1.0);
        assert_eq!(t.output_for(&[1.0], 0), 1.0);
        assert!((t.expectation(0) - (0.6 * -1.0 + 0.4 * 1.0)).abs() < 1e-12);
        assert!(t.check_sample_counts());
        assert_eq!(t.max_depth(), 1);
    }
}
