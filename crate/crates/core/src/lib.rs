pub mod diagram;
pub mod interp;
pub mod lambda;
pub mod registers;
pub mod two_way;
