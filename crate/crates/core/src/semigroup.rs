//! Linear heat semigroup and its inequality checks.
