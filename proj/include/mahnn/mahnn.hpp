#pragma once

// Umbrella header.

#include "mahnn/attention.hpp"
#include "mahnn/checkpoint.hpp"
#include "mahnn/classifier.hpp"
#include "mahnn/config.hpp"
#include "mahnn/data.hpp"
#include "mahnn/embedding.hpp"
#include "mahnn/errors.hpp"
#include "mahnn/export.hpp"
#include "mahnn/gradcheck.hpp"
#include "mahnn/lstm.hpp"
#include "mahnn/model.hpp"
#include "mahnn/optim.hpp"
#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"
#include "mahnn/train.hpp"
#include "mahnn/vocab.hpp"
