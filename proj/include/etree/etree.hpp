#pragma once

#include "etree/tree.hpp"
#include "etree/tree_io.hpp"
#include "etree/eseq.hpp"
#include "etree/census.hpp"
#include "etree/embedding.hpp"
#include "etree/coloring.hpp"
#include "etree/partition.hpp"
