#pragma once

#include "locsketch/analysis.hpp"
#include "locsketch/bit_sequence.hpp"
#include "locsketch/decode.hpp"
#include "locsketch/error.hpp"
#include "locsketch/io.hpp"
#include "locsketch/lexorder.hpp"
#include "locsketch/minhash.hpp"
#include "locsketch/model.hpp"
#include "locsketch/parallel.hpp"
#include "locsketch/rng.hpp"
#include "locsketch/sketch.hpp"
