#ifndef TOEPLITZ_TOEPLITZ_HPP
#define TOEPLITZ_TOEPLITZ_HPP

#include "toeplitz/arith.hpp"
#include "toeplitz/blocks.hpp"
#include "toeplitz/interior.hpp"
#include "toeplitz/io.hpp"
#include "toeplitz/report.hpp"
#include "toeplitz/rotation.hpp"
#include "toeplitz/segment.hpp"
#include "toeplitz/separator.hpp"
#include "toeplitz/sequence.hpp"

#endif  // TOEPLITZ_TOEPLITZ_HPP
