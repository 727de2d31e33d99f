# triortho: triorthogonal code switching toolkit
