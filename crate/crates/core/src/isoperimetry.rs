//! Model-space isoperimetric profiles and Minkowski content.
