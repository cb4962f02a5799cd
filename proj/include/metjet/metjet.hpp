#pragma once

#include "metjet/cantor.hpp"
#include "metjet/catalog.hpp"
#include "metjet/classify.hpp"
#include "metjet/contact.hpp"
#include "metjet/expr.hpp"
#include "metjet/extrema.hpp"
#include "metjet/handle.hpp"
#include "metjet/rng.hpp"
#include "metjet/sampling.hpp"
#include "metjet/spaces.hpp"
#include "metjet/tangency.hpp"
#include "metjet/trace.hpp"
#include "metjet/vec.hpp"
