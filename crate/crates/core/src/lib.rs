pub mod rdf;
pub mod ontology;
pub mod mapping;
pub mod reshape;
pub mod kgen;
pub mod query;
pub mod bench;
