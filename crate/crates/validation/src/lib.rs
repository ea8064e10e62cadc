//! Hosts the `acceptance` test target, which prints one verdict line per
//! criterion. Kept in its own package so it runs after every other suite.
