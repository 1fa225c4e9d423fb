#pragma once

// Umbrella header for the ECC proof-of-work library.

#include "eccpow/analysis.hpp"
#include "eccpow/block_header.hpp"
#include "eccpow/chain.hpp"
#include "eccpow/chain_config.hpp"
#include "eccpow/cli.hpp"
#include "eccpow/decoder.hpp"
#include "eccpow/gf2.hpp"
#include "eccpow/hash_vector.hpp"
#include "eccpow/pcm.hpp"
#include "eccpow/prng.hpp"
#include "eccpow/puzzle.hpp"
#include "eccpow/sha256.hpp"
#include "eccpow/sim.hpp"
#include "eccpow/util.hpp"
