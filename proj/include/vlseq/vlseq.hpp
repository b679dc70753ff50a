#pragma once

#include "vlseq/bernstein.hpp"
#include "vlseq/embedding.hpp"
#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/io.hpp"
#include "vlseq/norms.hpp"
#include "vlseq/sequence.hpp"
#include "vlseq/topology.hpp"
#include "vlseq/witness.hpp"
