//! Acceptance criteria for `modlie`, run as the `acceptance` test target.
